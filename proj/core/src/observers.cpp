#include "smgof/observers.hpp"

#include <cmath>

namespace smgof {

namespace {

constexpr double kPi = 3.14159265358979323846;

const UniformGrid& require_uniform(const PathRecord& path, const char* who) {
  if (!std::holds_alternative<UniformGrid>(path.grid))
    throw BlockMisalignedError(std::string(who) + ": path must live on the observation grid");
  return std::get<UniformGrid>(path.grid);
}

const FineGrid& require_fine(const PathRecord& path, const char* who) {
  if (!std::holds_alternative<FineGrid>(path.grid))
    throw BlockMisalignedError(std::string(who) + ": path must live on a fine grid");
  const auto& grid = std::get<FineGrid>(path.grid);
  if (path.num_points() != grid.num_points())
    throw BlockMisalignedError(std::string(who) + ": fine path length != n^2 + 1");
  return grid;
}

ObservationSeries squared_increment_series(const PathRecord& path, ModelKind kind,
                                           const TruncationRule* rule) {
  const auto& grid =
      require_uniform(path, rule ? "jump_robust_observer" : "local_vol_observer");
  const std::int64_t n = grid.n;
  const double alpha_n = rule ? rule->alpha_fn(n) : 0.0;

  ObservationSeries out{grid, kind, 1, {}, {}};
  out.y.resize(n);
  out.xhat.resize(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const double dx = path.state(i + 1, 0) - path.state(i, 0);
    const double scaled_sq = static_cast<double>(n) * dx * dx; // (sqrt(n) dx)^2
    out.y[i] = (rule && scaled_sq >= alpha_n) ? 0.0 : scaled_sq;
    out.xhat[i] = path.state(i, 0);
  }
  return out;
}

} // namespace

ObservationSeries local_vol_observer(const PathRecord& path) {
  return squared_increment_series(path, ModelKind::LocalVol, nullptr);
}

ObservationSeries jump_robust_observer(const PathRecord& path, const TruncationRule& rule) {
  if (!rule.alpha_fn) throw std::invalid_argument("jump_robust_observer: missing alpha_fn");
  return squared_increment_series(path, ModelKind::Jumps, &rule);
}

ObservationSeries microstructure_observer(const PathRecord& noisy_path) {
  const auto& grid = require_fine(noisy_path, "microstructure_observer");
  const std::int64_t n = grid.n;
  const double nd = static_cast<double>(n);

  std::vector<double> weights(n);
  for (std::int64_t i = 0; i < n; ++i)
    weights[i] = std::cos(kPi * (static_cast<double>(i) + 0.5) / nd);

  ObservationSeries out{grid.outer(), ModelKind::Microstructure, 2, {}, {}};
  out.y.resize(n);
  out.xhat.resize(2 * n);
  for (std::int64_t j = 0; j < n; ++j) {
    const std::int64_t base = n * j;
    double block_mean = 0.0, quad = 0.0, weighted = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      const double x = noisy_path.state(base + i, 0);
      const double dx = noisy_path.state(base + i + 1, 0) - x;
      block_mean += x;
      quad += dx * dx;
      weighted += weights[i] * x;
    }
    block_mean /= nd;
    const double xhat2 = quad / (2.0 * nd);
    out.y[j] = kPi * kPi * (2.0 / nd * weighted * weighted - xhat2);
    out.xhat[2 * j] = block_mean;
    out.xhat[2 * j + 1] = xhat2;
  }
  return out;
}

ObservationSeries stoch_vol_observer(const PathRecord& path) {
  const auto& grid = require_fine(path, "stoch_vol_observer");
  const std::int64_t n = grid.n;
  const double nd = static_cast<double>(n);
  const double n2 = nd * nd;

  std::vector<double> weights(n);
  for (std::int64_t i = 0; i < n; ++i)
    weights[i] = std::cos(kPi * (static_cast<double>(i) + 0.5) / nd);

  ObservationSeries out{grid.outer(), ModelKind::StochVol, 2, {}, {}};
  out.y.resize(n);
  out.xhat.resize(2 * n);
  for (std::int64_t j = 0; j < n; ++j) {
    const std::int64_t base = n * j;
    double mean2 = 0.0, weighted = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      const double dx = path.state(base + i + 1, 0) - path.state(base + i, 0);
      const double vol_proxy = n2 * dx * dx; // Xtilde2 at fine index base+i
      mean2 += vol_proxy;
      weighted += weights[i] * vol_proxy;
    }
    const double xhat2 = mean2 / nd;
    out.y[j] = 2.0 * kPi * kPi * (weighted * weighted / nd - xhat2 * xhat2);
    out.xhat[2 * j] = path.state(base, 0); // X1 at the outer time t_j
    out.xhat[2 * j + 1] = xhat2;
  }
  return out;
}

ParametricVolModel make_model(ModelKind kind, MeanFn mu, int param_dim,
                              std::vector<BasisFn> basis) {
  if (!mu) throw std::invalid_argument("make_model: missing mean handle");
  if (!basis.empty() && static_cast<int>(basis.size()) != param_dim)
    throw std::invalid_argument("make_model: basis size must equal param_dim");

  ParametricVolModel model;
  model.param_dim = param_dim;
  model.linear_basis = std::move(basis);
  model.mu = mu;
  switch (kind) {
    case ModelKind::LocalVol:
    case ModelKind::Jumps:
      model.sigma2 = [mu](std::span<const double> th, double t, std::span<const double> x) {
        const double m = mu(th, t, x);
        return 2.0 * m * m;
      };
      break;
    case ModelKind::Microstructure:
      model.sigma2 = [mu](std::span<const double> th, double t, std::span<const double> x) {
        const double m = mu(th, t, x) + kPi * kPi * x[1];
        return 2.0 * m * m;
      };
      break;
    case ModelKind::StochVol:
      model.sigma2 = [mu](std::span<const double> th, double t, std::span<const double> x) {
        const double m = mu(th, t, x) + 2.0 * kPi * kPi * x[1] * x[1];
        return 2.0 * m * m;
      };
      break;
  }
  return model;
}

} // namespace smgof
