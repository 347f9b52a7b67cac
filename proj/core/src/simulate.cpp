#include "smgof/simulate.hpp"

#include <cmath>

namespace smgof {

namespace {

void check_spec(const SdeSpec& spec, int substeps) {
  if (spec.x0.empty()) throw std::invalid_argument("SdeSpec: empty initial state");
  if (substeps < 1) throw std::invalid_argument("SimConfig: euler_substeps must be >= 1");
  if (!spec.drift.empty() && spec.drift.size() != spec.x0.size())
    throw std::invalid_argument("SdeSpec: drift size mismatch");
  if (!spec.diffusion.empty() && spec.diffusion.size() != spec.x0.size())
    throw std::invalid_argument("SdeSpec: diffusion size mismatch");
  for (double v : spec.x0)
    if (!std::isfinite(v)) throw NonFiniteError("SdeSpec: initial state not finite");
}

void check_finite(std::span<const double> state, std::int64_t interval) {
  for (double v : state)
    if (!std::isfinite(v))
      throw NonFiniteError("simulate: state not finite after interval " +
                           std::to_string(interval));
}

// Shared Euler stepper. `draw` fills the Brownian increments of one substep.
template <typename Grid, typename Draw>
PathRecord euler_core(const SdeSpec& spec, const Grid& grid, int substeps, Draw&& draw,
                      Rng* jump_rng) {
  check_spec(spec, substeps);
  const int dim = spec.dim();
  const std::int64_t intervals = grid.num_points() - 1;
  const double h = 1.0 / (static_cast<double>(intervals) * substeps);

  PathRecord path{AnyGrid{grid}, dim, {}, {}};
  path.states.resize(grid.num_points() * dim);

  std::vector<double> state(spec.x0.begin(), spec.x0.end());
  std::vector<double> next(dim);
  std::vector<double> dw(dim);
  for (int c = 0; c < dim; ++c) path.states[c] = state[c];

  const double lambda = spec.jump ? spec.jump->intensity : 0.0;

  for (std::int64_t i = 0; i < intervals; ++i) {
    for (int k = 0; k < substeps; ++k) {
      const double t = static_cast<double>(i * substeps + k) * h;
      draw(i, k, dw);
      const std::span<const double> s{state};
      for (int c = 0; c < dim; ++c) {
        double v = state[c];
        if (!spec.drift.empty() && spec.drift[c]) v += spec.drift[c](t, s) * h;
        if (!spec.diffusion.empty() && spec.diffusion[c]) v += spec.diffusion[c](t, s) * dw[c];
        next[c] = v;
      }
      if (jump_rng && lambda > 0.0) {
        const std::int64_t count = jump_rng->poisson(lambda * h);
        for (std::int64_t m = 0; m < count; ++m) next[0] += spec.jump->size_sampler(*jump_rng);
      }
      state.swap(next);
    }
    check_finite(state, i);
    for (int c = 0; c < dim; ++c) path.states[(i + 1) * dim + c] = state[c];
  }
  return path;
}

template <typename Grid>
PathRecord simulate_impl(const SdeSpec& spec, const Grid& grid, const SimConfig& cfg,
                         bool with_jumps) {
  Rng brownian(derive_seed(cfg.seed, 0));
  Rng jumps(derive_seed(cfg.seed, 1));
  const double sqrt_h =
      std::sqrt(1.0 / (static_cast<double>(grid.num_points() - 1) * cfg.euler_substeps));
  auto draw = [&](std::int64_t, int, std::vector<double>& dw) {
    for (double& v : dw) v = sqrt_h * brownian.normal();
  };
  return euler_core(spec, grid, cfg.euler_substeps, draw, with_jumps ? &jumps : nullptr);
}

} // namespace

PathRecord simulate_diffusion(const SdeSpec& spec, const UniformGrid& grid, const SimConfig& cfg) {
  return simulate_impl(spec, grid, cfg, false);
}

PathRecord simulate_diffusion(const SdeSpec& spec, const FineGrid& grid, const SimConfig& cfg) {
  return simulate_impl(spec, grid, cfg, false);
}

PathRecord simulate_jump_diffusion(const SdeSpec& spec, const UniformGrid& grid,
                                   const SimConfig& cfg) {
  if (!spec.jump) throw std::invalid_argument("simulate_jump_diffusion: jump spec required");
  return simulate_impl(spec, grid, cfg, true);
}

PathRecord simulate_latent_vol_pair(const SdeSpec& price, const SdeSpec& vol, const FineGrid& grid,
                                    const SimConfig& cfg) {
  if (price.dim() != 1 || vol.dim() != 1)
    throw std::invalid_argument("simulate_latent_vol_pair: price and vol specs are univariate");

  SdeSpec joint;
  joint.x0 = {price.x0[0], vol.x0[0]};
  const StateFn price_drift = price.drift.empty() ? StateFn{} : price.drift[0];
  const StateFn vol_drift = vol.drift.empty() ? StateFn{} : vol.drift[0];
  const StateFn vol_diffusion = vol.diffusion.empty() ? StateFn{} : vol.diffusion[0];
  joint.drift = {price_drift, vol_drift};
  joint.diffusion = {
      [](double, std::span<const double> s) { return std::sqrt(std::max(s[1], 0.0)); },
      vol_diffusion};
  auto path = simulate_impl(joint, grid, cfg, false);
  path.labels = {"price", "spot_variance"};
  return path;
}

PathRecord add_microstructure_noise(const PathRecord& path, const NoiseSpec& noise,
                                    const SimConfig& cfg) {
  if (!std::holds_alternative<FineGrid>(path.grid))
    throw BlockMisalignedError("add_microstructure_noise: path must live on a fine grid");
  if (!noise.variance) throw std::invalid_argument("add_microstructure_noise: variance handle");

  Rng rng(derive_seed(cfg.seed, 2));
  const std::int64_t points = path.num_points();
  PathRecord out{path.grid, 2, {}, {"noisy_price", "noise_variance"}};
  out.states.resize(points * 2);
  for (std::int64_t i = 0; i < points; ++i) {
    const double t = grid_time(path.grid, i);
    const double v = noise.variance(t);
    if (!(v >= 0.0) || !std::isfinite(v))
      throw NonFiniteError("add_microstructure_noise: variance not finite/nonnegative");
    const double eps = v > 0.0 ? std::sqrt(v) * rng.normal() : 0.0;
    out.states[i * 2] = path.state(i, 0) + eps;
    out.states[i * 2 + 1] = v;
  }
  return out;
}

PathRecord euler_path_with_increments(const SdeSpec& spec, const AnyGrid& grid, int substeps,
                                      std::span<const double> increments) {
  const std::int64_t intervals = grid_num_points(grid) - 1;
  const int dim = spec.dim();
  if (static_cast<std::int64_t>(increments.size()) != intervals * substeps * dim)
    throw std::invalid_argument("euler_path_with_increments: increment count mismatch");
  auto draw = [&](std::int64_t i, int k, std::vector<double>& dw) {
    const double* base = increments.data() + (i * substeps + k) * dim;
    for (int c = 0; c < dim; ++c) dw[c] = base[c];
  };
  return std::visit(
      [&](const auto& g) { return euler_core(spec, g, substeps, draw, nullptr); }, grid);
}

} // namespace smgof
