#include "smgof/wavelet.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>

namespace smgof {

namespace {
// 1/sqrt(2) as a fixed constant so the butterfly is bit-identical everywhere
// (this translation unit is built with FP contraction off).
constexpr double kInvSqrt2 = 0.70710678118654752440;
} // namespace

int resolution_level(std::int64_t n) {
  if (n < 4) throw std::invalid_argument("resolution_level: n must be >= 4");
  const int floor_log2 = std::bit_width(static_cast<std::uint64_t>(n)) - 1;
  return floor_log2 / 2;
}

std::vector<double> scaling_coefficients(const NormalisedSeries& zs, int level) {
  const std::int64_t n = zs.grid.n;
  if (level < 0) throw std::invalid_argument("scaling_coefficients: level must be >= 0");
  const std::int64_t bins = std::int64_t{1} << level;
  if (bins > n)
    throw LevelTooFineError("scaling_coefficients: 2^J = " + std::to_string(bins) +
                            " exceeds n = " + std::to_string(n));
  std::vector<double> out(bins, 0.0);
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t k = (bins * i) / n; // t_i lies in [k 2^-J, (k+1) 2^-J)
    out[k] += zs.z[i];
  }
  const double weight = std::exp2(0.5 * level) / static_cast<double>(n); // 2^{J/2} / n
  for (double& v : out) v *= weight;
  return out;
}

WaveletDecomposition fast_haar_transform(std::vector<double> scaling) {
  const std::size_t len = scaling.size();
  if (len == 0 || (len & (len - 1)) != 0)
    throw NotPowerOfTwoError("fast_haar_transform: input length " + std::to_string(len) +
                             " is not a power of two");
  const int level = std::bit_width(len) - 1;

  WaveletDecomposition dec;
  dec.level = level;
  dec.scaling = scaling;
  dec.beta.resize(level);

  std::vector<double>& s = scaling; // reused as the working buffer
  for (int j = level - 1; j >= 0; --j) {
    const std::size_t half = std::size_t{1} << j;
    dec.beta[j].resize(half);
    for (std::size_t k = 0; k < half; ++k) {
      const double lo = s[2 * k];
      const double hi = s[2 * k + 1];
      dec.beta[j][k] = (lo - hi) * kInvSqrt2;
      s[k] = (lo + hi) * kInvSqrt2;
    }
  }
  dec.alpha00 = s[0];
  return dec;
}

double max_statistic(const WaveletDecomposition& dec) {
  double best = std::abs(dec.alpha00);
  for (const auto& lvl : dec.beta)
    for (double b : lvl) best = std::max(best, std::abs(b));
  return best;
}

GumbelConstants gumbel_constants(int level) {
  if (level < 1) throw std::invalid_argument("gumbel_constants: level must be >= 1");
  GumbelConstants c;
  c.m = std::int64_t{1} << level;
  const double log_m = std::log(static_cast<double>(c.m));
  c.a = 1.0 / std::sqrt(2.0 * log_m);
  c.b = 1.0 / c.a - 0.5 * c.a * std::log(3.14159265358979323846 * log_m);
  return c;
}

double gumbel_quantile(const GumbelConstants& c, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("gumbel_quantile: alpha must lie in (0,1)");
  return -c.a * std::log(-std::log1p(-alpha)) + c.b;
}

double gumbel_p_value(const GumbelConstants& c, double scaled_statistic) {
  const double g = (scaled_statistic - c.b) / c.a;
  return -std::expm1(-std::exp(-g));
}

} // namespace smgof
