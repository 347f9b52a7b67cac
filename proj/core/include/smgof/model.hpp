#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smgof/errors.hpp"
#include "smgof/grid.hpp"
#include "smgof/rng.hpp"

namespace smgof {

enum class ModelKind { LocalVol, Jumps, Microstructure, StochVol };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

// Mean/variance handle: (theta, t, covariates) -> value.
using MeanFn = std::function<double(std::span<const double>, double, std::span<const double>)>;
using VarFn = MeanFn;
// Regression basis handle: (t, covariates) -> value.
using BasisFn = std::function<double(double, std::span<const double>)>;

// Parametric null model for the volatility-like process: mean mu(theta,t,x)
// and conditional variance sigma2(theta,t,x) of the observations Y.
struct ParametricVolModel {
  MeanFn mu;
  VarFn sigma2;
  int param_dim = 1;
  std::vector<double> lower; // closed parameter box; defaults to [-1e6, 1e6]^p
  std::vector<double> upper;
  // When non-empty (size == param_dim), declares mu(theta,t,x) = sum_k theta_k basis_k(t,x)
  // and enables the closed-form least-squares path.
  std::vector<BasisFn> linear_basis;

  std::vector<double> lower_or_default() const {
    return lower.empty() ? std::vector<double>(param_dim, -1e6) : lower;
  }
  std::vector<double> upper_or_default() const {
    return upper.empty() ? std::vector<double>(param_dim, 1e6) : upper;
  }
};

// Compound-Poisson jump component: jumps arrive at rate `intensity` per unit
// time and are added to the first state component.
struct JumpSpec {
  double intensity = 0.0;
  std::function<double(Rng&)> size_sampler;
};

// Additive observation noise on the first component; centred Gaussian with
// time-varying variance. `moment_cap` records the kappa of the assumed
// moment bound E|eps|^kappa <= C (metadata; any Gaussian satisfies it).
struct NoiseSpec {
  std::function<double(double)> variance;
  double moment_cap = 12.0;
};

// State-coefficient handle: (t, state) -> value. An empty handle means 0.
using StateFn = std::function<double(double, std::span<const double>)>;

// SDE with one independent Brownian driver per component:
//   dX_c = drift_c(t, X) dt + diffusion_c(t, X) dB_c.
// The diffusion handle supplies the Brownian loading directly (sqrt of the
// variance-like process).
struct SdeSpec {
  std::vector<StateFn> drift;
  std::vector<StateFn> diffusion;
  std::vector<double> x0 = {1.0};
  std::optional<JumpSpec> jump;
  std::optional<NoiseSpec> noise;

  int dim() const { return static_cast<int>(x0.size()); }
};

// The (Y_i, Xhat_i) pairs produced by an observation constructor.
struct ObservationSeries {
  UniformGrid grid;
  ModelKind kind = ModelKind::LocalVol;
  int covariate_dim = 1;
  std::vector<double> y;    // length grid.n
  std::vector<double> xhat; // grid.n x covariate_dim, row-major

  std::span<const double> covariate(std::int64_t i) const {
    return {xhat.data() + i * covariate_dim, static_cast<std::size_t>(covariate_dim)};
  }
};

// Z_i(theta) = (Y_i - mu(theta,t_i,Xhat_i)) / sigma(theta,t_i,Xhat_i).
struct NormalisedSeries {
  UniformGrid grid;
  std::vector<double> z;
  std::vector<double> theta;
};

NormalisedSeries normalise(const ObservationSeries& series, const ParametricVolModel& model,
                           std::span<const double> theta);

} // namespace smgof
