#include "smgof/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "smgof/parallel.hpp"

namespace smgof {

namespace {

double mean_xhat2(const ObservationSeries& observed) {
  double acc = 0.0;
  for (std::int64_t i = 0; i < observed.grid.n; ++i) acc += observed.covariate(i)[1];
  return std::max(acc / static_cast<double>(observed.grid.n), 0.0);
}

StateFn fitted_loading(MeanFn mu, std::vector<double> theta) {
  return [mu = std::move(mu), theta = std::move(theta)](double t, std::span<const double> s) {
    return std::sqrt(std::max(mu(theta, t, s), 0.0));
  };
}

} // namespace

NullSimulator make_null_simulator(ModelKind kind, const ParametricVolModel& model,
                                  const ObservationSeries& observed,
                                  const TruncationRule& truncation, int euler_substeps) {
  const std::int64_t n = observed.grid.n;
  const double x0 = observed.xhat.empty() ? 1.0 : observed.covariate(0)[0];
  const MeanFn mu = model.mu;

  switch (kind) {
    case ModelKind::LocalVol:
    case ModelKind::Jumps: {
      const bool truncate = kind == ModelKind::Jumps;
      return [=](std::span<const double> theta, std::uint64_t seed) {
        SdeSpec spec;
        spec.x0 = {x0};
        spec.diffusion = {fitted_loading(mu, {theta.begin(), theta.end()})};
        const auto path =
            simulate_diffusion(spec, UniformGrid(n), SimConfig{seed, euler_substeps});
        return truncate ? jump_robust_observer(path, truncation) : local_vol_observer(path);
      };
    }
    case ModelKind::Microstructure: {
      // The noise variance is a nuisance the null does not parametrise; the
      // resimulation holds it at the observed average level.
      const double noise_var = mean_xhat2(observed);
      return [=](std::span<const double> theta, std::uint64_t seed) {
        SdeSpec spec;
        spec.x0 = {x0};
        std::vector<double> th{theta.begin(), theta.end()};
        spec.diffusion = {[mu, th, noise_var](double t, std::span<const double> s) {
          const double cov[2] = {s[0], noise_var};
          return std::sqrt(std::max(mu(th, t, std::span<const double>{cov, 2}), 0.0));
        }};
        const SimConfig cfg{seed, euler_substeps};
        const auto path = simulate_diffusion(spec, FineGrid(n), cfg);
        NoiseSpec noise{[noise_var](double) { return noise_var; }, 12.0};
        return microstructure_observer(add_microstructure_noise(path, noise, cfg));
      };
    }
    case ModelKind::StochVol: {
      const double x2_init = mean_xhat2(observed);
      return [=](std::span<const double> theta, std::uint64_t seed) {
        SdeSpec price;
        price.x0 = {x0};
        SdeSpec vol;
        vol.x0 = {x2_init};
        vol.diffusion = {fitted_loading(mu, {theta.begin(), theta.end()})};
        const auto path =
            simulate_latent_vol_pair(price, vol, FineGrid(n), SimConfig{seed, euler_substeps});
        return stoch_vol_observer(path);
      };
    }
  }
  throw std::invalid_argument("make_null_simulator: unknown kind");
}

ObservationSeries simulate_scenario_data(const Scenario& s, std::uint64_t seed) {
  const SimConfig cfg{seed, s.euler_substeps};
  switch (s.kind) {
    case ModelKind::LocalVol:
      return local_vol_observer(simulate_diffusion(s.true_dynamics, UniformGrid(s.n), cfg));
    case ModelKind::Jumps:
      return jump_robust_observer(simulate_jump_diffusion(s.true_dynamics, UniformGrid(s.n), cfg),
                                  s.truncation);
    case ModelKind::Microstructure: {
      if (!s.noise) throw std::invalid_argument("scenario: microstructure kind needs noise spec");
      const auto path = simulate_diffusion(s.true_dynamics, FineGrid(s.n), cfg);
      return microstructure_observer(add_microstructure_noise(path, *s.noise, cfg));
    }
    case ModelKind::StochVol: {
      if (!s.vol_dynamics) throw std::invalid_argument("scenario: stochvol kind needs vol spec");
      return stoch_vol_observer(
          simulate_latent_vol_pair(s.true_dynamics, *s.vol_dynamics, FineGrid(s.n), cfg));
    }
  }
  throw std::invalid_argument("scenario: unknown kind");
}

ScenarioResult run_scenario(const Scenario& s, int parallelism) {
  if (s.mc_reps < 1) throw std::invalid_argument("run_scenario: mc_reps must be >= 1");
  if (s.bootstrap_reps < 50)
    throw std::invalid_argument("run_scenario: bootstrap_reps must be >= 50");
  for (double a : s.alpha_levels)
    if (!(a > 0.0 && a < 1.0))
      throw std::invalid_argument("run_scenario: alpha levels must lie in (0,1)");

  const auto start = std::chrono::steady_clock::now();
  const std::size_t levels = s.alpha_levels.size();
  // Per-replication decision matrix; -1 marks a failed replication.
  std::vector<signed char> decisions(static_cast<std::size_t>(s.mc_reps) * levels, 0);
  std::vector<char> failed(s.mc_reps, 0);

  parallel_for(s.mc_reps, parallelism, [&](std::int64_t r) {
    const std::uint64_t data_seed = derive_seed(s.base_seed, 2 * r);
    const std::uint64_t boot_seed = derive_seed(s.base_seed, 2 * r + 1);
    try {
      const ObservationSeries series = simulate_scenario_data(s, data_seed);
      const NullSimulator null_sim =
          make_null_simulator(s.kind, s.null_model, series, s.truncation, s.euler_substeps);
      // One bootstrap pass decides every alpha level.
      const auto dist = bootstrap_distribution(series, s.null_model, null_sim, s.bootstrap_reps,
                                               boot_seed, 1);
      for (std::size_t a = 0; a < levels; ++a) {
        const auto report = bootstrap_report(dist, s.alpha_levels[a], boot_seed);
        decisions[r * levels + a] = report.reject ? 1 : 0;
      }
    } catch (const Error&) {
      failed[r] = 1;
    }
  });

  ScenarioResult result;
  result.name = s.name;
  result.block = s.block;
  result.n = s.n;
  result.alpha_levels = s.alpha_levels;
  result.mc_reps = s.mc_reps;
  for (char f : failed) result.fail_count += f;
  const int decided = s.mc_reps - result.fail_count;
  for (std::size_t a = 0; a < levels; ++a) {
    std::int64_t rejections = 0;
    for (int r = 0; r < s.mc_reps; ++r)
      if (!failed[r]) rejections += decisions[r * levels + a];
    const double rate = decided > 0 ? static_cast<double>(rejections) / decided : 0.0;
    result.rejection_rate.push_back(rate);
    result.mc_standard_error.push_back(std::sqrt(rate * (1.0 - rate) / s.mc_reps));
  }
  result.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

namespace {

struct Row {
  std::string name;
  StateFn drift;     // underlying drift b_t
  StateFn loading;   // underlying Brownian loading sqrt(mu_t)
};

ParametricVolModel constant_model() {
  return make_model(
      ModelKind::LocalVol,
      [](std::span<const double> th, double, std::span<const double>) { return th[0]; }, 1,
      {[](double, std::span<const double>) { return 1.0; }});
}

ParametricVolModel proportional_model() {
  return make_model(
      ModelKind::LocalVol,
      [](std::span<const double> th, double, std::span<const double> x) {
        return th[0] * x[0] * x[0];
      },
      1, {[](double, std::span<const double> x) { return x[0] * x[0]; }});
}

std::vector<Row> drift_rows(StateFn loading) {
  auto l = [loading](const char* name, StateFn drift) {
    return Row{name, std::move(drift), loading};
  };
  return {
      l("b_t = 0", {}),
      l("b_t = 2", [](double, std::span<const double>) { return 2.0; }),
      l("b_t = X_t", [](double, std::span<const double> s) { return s[0]; }),
      l("b_t = 2 - X_t", [](double, std::span<const double> s) { return 2.0 - s[0]; }),
      l("b_t = t X_t", [](double t, std::span<const double> s) { return t * s[0]; }),
  };
}

} // namespace

std::vector<Scenario> table1_scenarios(double scale, std::uint64_t base_seed) {
  if (!(scale > 0.0 && scale <= 1.0))
    throw std::invalid_argument("table1_scenarios: scale must lie in (0,1]");
  const int mc = std::max(1, static_cast<int>(std::lround(1000.0 * scale)));
  const int boot = std::max(50, static_cast<int>(std::lround(1000.0 * scale)));

  const StateFn unit_loading = [](double, std::span<const double>) { return 1.0; };
  const StateFn prop_loading = [](double, std::span<const double> s) { return std::abs(s[0]); };
  const StateFn drift_x = [](double, std::span<const double> s) { return s[0]; };
  const StateFn drift_2mx = [](double, std::span<const double> s) { return 2.0 - s[0]; };

  struct Block {
    std::string label;
    ParametricVolModel model;
    std::vector<Row> rows;
  };
  std::vector<Block> blocks;
  blocks.push_back({"Constant volatility, null, mu_t = 1", constant_model(),
                    drift_rows(unit_loading)});
  blocks.push_back(
      {"Constant volatility, alternative, b_t = X_t", constant_model(),
       {
           {"sqrt(mu_t) = 1 + X_t", drift_x,
            [](double, std::span<const double> s) { return 1.0 + s[0]; }},
           {"sqrt(mu_t) = 1 + sin(5 X_t)", drift_x,
            [](double, std::span<const double> s) { return 1.0 + std::sin(5.0 * s[0]); }},
           {"sqrt(mu_t) = 1 + X_t exp(t)", drift_x,
            [](double t, std::span<const double> s) { return 1.0 + s[0] * std::exp(t); }},
           {"sqrt(mu_t) = 1 + X_t sin(5 t)", drift_x,
            [](double t, std::span<const double> s) { return 1.0 + s[0] * std::sin(5.0 * t); }},
           {"sqrt(mu_t) = 1 + t X_t", drift_x,
            [](double t, std::span<const double> s) { return 1.0 + t * s[0]; }},
       }});
  blocks.push_back({"Proportional volatility, null, mu_t = X_t^2", proportional_model(),
                    drift_rows(prop_loading)});
  blocks.push_back(
      {"Proportional volatility, alternative, b_t = 2 - X_t", proportional_model(),
       {
           {"mu_t = 1 + X_t^2", drift_2mx,
            [](double, std::span<const double> s) { return std::sqrt(1.0 + s[0] * s[0]); }},
           {"mu_t = 1", drift_2mx, [](double, std::span<const double>) { return 1.0; }},
           {"mu_t = 5 |X_t|^(3/2)", drift_2mx,
            [](double, std::span<const double> s) {
              return std::sqrt(5.0 * std::pow(std::abs(s[0]), 1.5));
            }},
           {"mu_t = 5 |X_t|", drift_2mx,
            [](double, std::span<const double> s) { return std::sqrt(5.0 * std::abs(s[0])); }},
           {"mu_t = (1 + X_t)^2", drift_2mx,
            [](double, std::span<const double> s) { return std::abs(1.0 + s[0]); }},
       }});

  std::vector<Scenario> out;
  std::uint64_t idx = 0;
  for (const auto& block : blocks) {
    for (const auto& row : block.rows) {
      for (std::int64_t n : {100, 200, 500}) {
        Scenario s;
        s.name = row.name;
        s.block = block.label;
        s.kind = ModelKind::LocalVol;
        s.null_model = block.model;
        s.true_dynamics.x0 = {1.0};
        s.true_dynamics.drift = {row.drift};
        s.true_dynamics.diffusion = {row.loading};
        s.n = n;
        s.alpha_levels = {0.05, 0.10};
        s.mc_reps = mc;
        s.bootstrap_reps = boot;
        s.base_seed = derive_seed(base_seed, 0x5eed0000 + idx);
        out.push_back(std::move(s));
        ++idx;
      }
    }
  }
  return out;
}

std::vector<ScenarioResult> table1_suite(double scale, std::uint64_t base_seed, int parallelism) {
  std::vector<ScenarioResult> results;
  for (const auto& s : table1_scenarios(scale, base_seed))
    results.push_back(run_scenario(s, parallelism));
  return results;
}

std::string format_results_table(const std::vector<ScenarioResult>& results) {
  // Rows arrive n-major per name (100, 200, 500); regroup into one line per
  // hypothesis with n x alpha columns.
  std::string out;
  out += "n                                 100             200             500\n";
  out += "alpha                          5%    10%       5%    10%       5%    10%\n";
  std::string block;
  for (std::size_t i = 0; i < results.size(); i += 3) {
    const auto& r = results[i];
    if (r.block != block) {
      block = r.block;
      out += "\n" + block + "\n";
    }
    char line[256];
    std::snprintf(line, sizeof(line), "  %-26s", r.name.c_str());
    out += line;
    for (std::size_t k = 0; k < 3 && i + k < results.size(); ++k) {
      const auto& cell = results[i + k];
      std::snprintf(line, sizeof(line), "  %5.3f  %5.3f ", cell.rejection_rate[0],
                    cell.rejection_rate[1]);
      out += line;
    }
    out += "\n";
  }
  return out;
}

std::vector<DetectionPower> detection_rate_sweep(double c, const std::vector<std::int64_t>& ns,
                                                 int reps, std::uint64_t seed, double alpha,
                                                 int parallelism) {
  if (c < 0.0) throw std::invalid_argument("detection_rate_sweep: c must be >= 0");
  if (reps < 1) throw std::invalid_argument("detection_rate_sweep: reps must be >= 1");

  std::vector<DetectionPower> out;
  for (std::size_t which = 0; which < ns.size(); ++which) {
    const std::int64_t n = ns[which];
    const UniformGrid grid(n);
    const int level = resolution_level(n);
    const double width = std::exp2(-level);
    const double amplitude =
        c * std::pow(static_cast<double>(n), -0.25) * std::sqrt(std::log(static_cast<double>(n)));

    std::vector<char> rejected(reps, 0);
    parallel_for(reps, parallelism, [&](std::int64_t r) {
      Rng rng(derive_seed(seed, which * 1000003ull + r));
      NormalisedSeries zs{grid, std::vector<double>(n), {}};
      for (std::int64_t i = 0; i < n; ++i) {
        const double t = grid.time(i);
        const double bump = (t >= 0.5 && t < 0.5 + width) ? amplitude : 0.0;
        zs.z[i] = bump + rng.normal();
      }
      rejected[r] = asymptotic_test_z(zs, alpha).reject ? 1 : 0;
    });
    std::int64_t hits = 0;
    for (char v : rejected) hits += v;
    out.push_back({n, static_cast<double>(hits) / reps});
  }
  return out;
}

} // namespace smgof
