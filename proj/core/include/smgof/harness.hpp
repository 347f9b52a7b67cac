#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smgof/hypothesis.hpp"
#include "smgof/observers.hpp"
#include "smgof/simulate.hpp"

namespace smgof {

// One Monte Carlo experiment: generate data from `true_dynamics`, observe it
// with the constructor selected by `kind`, and run the bootstrap test of
// `null_model` at each alpha level.
struct Scenario {
  std::string name;  // row label, e.g. "b_t = X_t"
  std::string block; // block label, e.g. "Constant volatility, null, mu_t = 1"
  ModelKind kind = ModelKind::LocalVol;
  ParametricVolModel null_model;
  SdeSpec true_dynamics;
  std::optional<SdeSpec> vol_dynamics; // StochVol scenarios
  std::optional<NoiseSpec> noise;      // Microstructure scenarios
  TruncationRule truncation = TruncationRule::log_squared();
  std::int64_t n = 100;
  std::vector<double> alpha_levels = {0.05, 0.10};
  int mc_reps = 1000;
  int bootstrap_reps = 1000;
  std::uint64_t base_seed = 0;
  int euler_substeps = 10;
};

struct ScenarioResult {
  std::string name;
  std::string block;
  std::int64_t n = 0;
  std::vector<double> alpha_levels;
  std::vector<double> rejection_rate;    // one per alpha level
  std::vector<double> mc_standard_error; // sqrt(r(1-r)/mc_reps)
  int mc_reps = 0;
  int fail_count = 0; // replications that failed estimation, decided neither way
  double wall_time_sec = 0.0;
};

// Null-model resimulator used by the bootstrap: drift and jumps zeroed, the
// volatility-like process taken from the fitted model. Initial conditions
// come from the observed series (first covariate; for the block observers
// the mean of the Xhat2 estimates seeds the nuisance component).
NullSimulator make_null_simulator(ModelKind kind, const ParametricVolModel& model,
                                  const ObservationSeries& observed,
                                  const TruncationRule& truncation, int euler_substeps);

// Simulates one dataset of the scenario's true dynamics and observes it.
ObservationSeries simulate_scenario_data(const Scenario& s, std::uint64_t seed);

ScenarioResult run_scenario(const Scenario& s, int parallelism = 0);

// The full rejection-probability grid: 20 hypothesis rows x n in {100,200,500},
// each tested at 5% and 10%. `scale` rescales the 1000 x 1000 replication
// counts (bootstrap floor 50).
std::vector<Scenario> table1_scenarios(double scale, std::uint64_t base_seed);
std::vector<ScenarioResult> table1_suite(double scale, std::uint64_t base_seed,
                                         int parallelism = 0);

// Renders results in the table's layout (rows grouped by block, columns
// n x alpha).
std::string format_results_table(const std::vector<ScenarioResult>& results);

struct DetectionPower {
  std::int64_t n = 0;
  double power = 0.0;
};

// Injects Z_i = amplitude * s(t_i) + N(0,1) with amplitude
// c n^{-1/4} log(n)^{1/2} and s the indicator of one level-J bin starting at
// t = 1/2, then runs the asymptotic test. At this amplitude the power should
// be roughly level across n.
std::vector<DetectionPower> detection_rate_sweep(double c, const std::vector<std::int64_t>& ns,
                                                 int reps, std::uint64_t seed, double alpha = 0.05,
                                                 int parallelism = 0);

} // namespace smgof
