#pragma once

#include <cstdint>
#include <vector>

#include "smgof/errors.hpp"
#include "smgof/model.hpp"

namespace smgof {

// Haar decomposition of a normalised series: scaling coefficients at the
// resolution level J, plus the coarse coefficient alpha_{0,0} and wavelet
// coefficients beta_{j,k} for j = 0..J-1 obtained from the cascade.
struct WaveletDecomposition {
  int level = 0;                         // J
  std::vector<double> scaling;           // 2^J entries, alpha_{J,k}
  double alpha00 = 0.0;                  // alpha_{0,0}
  std::vector<std::vector<double>> beta; // beta[j] has 2^j entries
};

// Normalising constants of the Gumbel limit for the maximum over m = 2^J
// coefficients: a_m = (2 log m)^{-1/2}, b_m = a_m^{-1} - a_m/2 * log(pi log m).
struct GumbelConstants {
  double a = 0.0;
  double b = 0.0;
  std::int64_t m = 0;
};

// J = floor(log2(n) / 2), evaluated in integer arithmetic so 2^J is of
// order sqrt(n).
int resolution_level(std::int64_t n);

// alpha_{J,k} = n^{-1} sum_i phi_{J,k}(t_i) Z_i. Each observation lands in
// exactly one bin k = floor(2^J i / n); linear time.
std::vector<double> scaling_coefficients(const NormalisedSeries& zs, int level);

// Decimating Haar cascade: s'_k = (s_{2k}+s_{2k+1})/sqrt(2),
// d_k = (s_{2k}-s_{2k+1})/sqrt(2), recursing on s' and emitting d as the
// beta coefficients of that level. Input length must be a power of two.
WaveletDecomposition fast_haar_transform(std::vector<double> scaling);

// max over |alpha_{0,0}| and all |beta_{j,k}|, j < J. The level-J scaling
// coefficients themselves are not part of the statistic.
double max_statistic(const WaveletDecomposition& dec);

GumbelConstants gumbel_constants(int level);

// q_{n,alpha} = -a_m log(-log(1-alpha)) + b_m; the test rejects when
// sqrt(n) * T exceeds this.
double gumbel_quantile(const GumbelConstants& c, double alpha);

// Gumbel survival of the scaled statistic: 1 - exp(-exp(-(s - b)/a)).
double gumbel_p_value(const GumbelConstants& c, double scaled_statistic);

} // namespace smgof
