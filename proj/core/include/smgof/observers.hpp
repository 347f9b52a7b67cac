#pragma once

#include <functional>

#include "smgof/model.hpp"
#include "smgof/simulate.hpp"

namespace smgof {

// Threshold sequence alpha_n for the truncated realised volatility. The
// default alpha_n = log(n)^2 grows faster than log(n) and slower than any
// power of n.
struct TruncationRule {
  std::function<double(std::int64_t)> alpha_fn;

  static TruncationRule log_squared() {
    return {[](std::int64_t n) {
      const double l = std::log(static_cast<double>(n));
      return l * l;
    }};
  }
};

// Realised volatility: Y_i = n (X_{t_{i+1}} - X_{t_i})^2, Xhat_i = X_{t_i}.
// Paired variance function sigma^2 = 2 mu^2.
ObservationSeries local_vol_observer(const PathRecord& path);

// Truncated realised volatility: Y_i = g_n(sqrt(n) dX_i) with
// g_n(x) = x^2 1{x^2 < alpha_n}.
ObservationSeries jump_robust_observer(const PathRecord& path, const TruncationRule& rule);

// Pre-averaged observations from a noisy fine-grid path (component 0):
//   Xhat1_j = block mean, Xhat2_j = (2n)^-1 sum (dXtilde)^2,
//   Y_j = pi^2 (2 n^-1 (sum_i cos(pi(i+1/2)/n) Xtilde_{nj+i})^2 - Xhat2_j).
// Paired variance function sigma^2 = 2 (mu + pi^2 X2)^2 with Xhat2 plugged in.
ObservationSeries microstructure_observer(const PathRecord& noisy_path);

// Vol-of-vol observations from a fine-grid price path (component 0):
// Xtilde2_i = n^2 (dX1_i)^2, Xhat2_j = block mean of Xtilde2,
//   Y_j = 2 pi^2 (n^-1 (sum_i cos(pi(i+1/2)/n) Xtilde2_{nj+i})^2 - Xhat2_j^2).
// Covariates are (X1_{t_j}, Xhat2_j); sigma^2 = 2 (mu + 2 pi^2 X2^2)^2.
ObservationSeries stoch_vol_observer(const PathRecord& path);

// Builds the model paired with an observation kind: mu as given and the
// kind's variance function. `basis`, when non-empty, declares linearity of
// mu in theta and enables the closed-form least-squares path.
ParametricVolModel make_model(ModelKind kind, MeanFn mu, int param_dim,
                              std::vector<BasisFn> basis = {});

} // namespace smgof
