#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "smgof/grid.hpp"
#include "smgof/model.hpp"

namespace smgof {

enum class Scheme { EulerMaruyama };

struct SimConfig {
  std::uint64_t seed = 0;
  int euler_substeps = 10; // fine integration substeps per grid interval
  Scheme scheme = Scheme::EulerMaruyama;
};

// Discrete path of the underlying process: one state vector per grid time.
struct PathRecord {
  AnyGrid grid;
  int components = 1;
  std::vector<double> states; // num_points x components, row-major
  std::vector<std::string> labels;

  std::int64_t num_points() const { return grid_num_points(grid); }
  double state(std::int64_t i, int c) const { return states[i * components + c]; }
};

// Euler-Maruyama path of `spec` on the grid refined by cfg.euler_substeps and
// subsampled back to grid times. The Brownian draws come from a stream
// derived from cfg.seed; jump draws, when present, use a separate stream so
// zero-intensity jump specs reduce exactly to the plain diffusion.
PathRecord simulate_diffusion(const SdeSpec& spec, const UniformGrid& grid, const SimConfig& cfg);
PathRecord simulate_diffusion(const SdeSpec& spec, const FineGrid& grid, const SimConfig& cfg);

// As simulate_diffusion, plus compound-Poisson jumps added to component 0:
// per integration substep of length h, a Poisson(intensity * h) number of
// sizes drawn from the spec's sampler.
PathRecord simulate_jump_diffusion(const SdeSpec& spec, const UniformGrid& grid,
                                   const SimConfig& cfg);

// Joint path (X1, X2) on the fine grid with independent Brownian drivers:
//   dX1 = b(t,X) dt + sqrt(max(X2,0)) dB,   dX2 = b'(t,X) dt + vol.diffusion(t,X) dB'.
// The price loading is wired to the latent variance; priceSpec.diffusion is
// ignored. X2 is floored at 0 inside the square root only.
PathRecord simulate_latent_vol_pair(const SdeSpec& price, const SdeSpec& vol, const FineGrid& grid,
                                    const SimConfig& cfg);

// Component 0 plus centred Gaussian noise with variance noise.variance(t'),
// evaluated at each fine time. The output keeps the noisy series as
// component 0 and stores the noise-variance path as component 1.
PathRecord add_microstructure_noise(const PathRecord& path, const NoiseSpec& noise,
                                    const SimConfig& cfg);

// Deterministic Euler core: integrates `spec` using caller-supplied Brownian
// increments laid out substep-major then component-major, i.e.
// increments[(i*substeps + k)*dim + c]. Exposed so convergence studies can
// coarsen one fine Brownian path across resolutions.
PathRecord euler_path_with_increments(const SdeSpec& spec, const AnyGrid& grid, int substeps,
                                      std::span<const double> increments);

} // namespace smgof
