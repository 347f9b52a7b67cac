#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "smgof/estimation.hpp"
#include "smgof/model.hpp"
#include "smgof/wavelet.hpp"

namespace smgof {

enum class TestMethod { Asymptotic, Bootstrap };

std::string to_string(TestMethod method);

struct TestReport {
  double statistic = 0.0;        // T(theta_hat)
  double scaled_statistic = 0.0; // sqrt(n) * T
  double critical_value = 0.0;   // q_{n,alpha} (asymptotic) or bootstrap quantile
  double p_value = 1.0;
  bool reject = false;
  double alpha = 0.05;
  TestMethod method = TestMethod::Asymptotic;
  std::vector<double> theta_hat;
  std::vector<std::uint64_t> seeds;
  int bootstrap_reps = 0; // 0 for the asymptotic test
  std::int64_t n = 0;
  int level = 0; // resolution level J
};

// Simulates one observation series from the fitted null: (theta, seed) -> series.
using NullSimulator =
    std::function<ObservationSeries(std::span<const double>, std::uint64_t)>;

// Statistic T(theta_hat) of a series under a model: fit, normalise, decompose
// at J = resolution_level(n), take the max coefficient.
double test_statistic(const ObservationSeries& series, const ParametricVolModel& model,
                      std::vector<double>* theta_out = nullptr);

// Gumbel test on pre-normalised observations; used when Z is constructed
// directly (calibration studies, detection sweeps).
TestReport asymptotic_test_z(const NormalisedSeries& zs, double alpha);

// Theorem-2 test: reject when sqrt(n) T(theta_hat) exceeds the Gumbel
// quantile q_{n,alpha}.
TestReport asymptotic_test(const ObservationSeries& series, const ParametricVolModel& model,
                           double alpha);

// One bootstrap pass, reusable across alpha levels: the data statistic plus
// the sorted simulated statistics. Replications whose refit fails are
// dropped; more than 10% failures aborts.
struct BootstrapDistribution {
  double statistic = 0.0;
  std::vector<double> theta_hat;
  std::vector<double> sorted_stats; // ascending, one per surviving replication
  int failures = 0;
  std::int64_t n = 0;
  int level = 0;
};

BootstrapDistribution bootstrap_distribution(const ObservationSeries& series,
                                             const ParametricVolModel& model,
                                             const NullSimulator& null_simulator, int bootstrap_reps,
                                             std::uint64_t seed, int parallelism = 0);

// Upper empirical quantile: the ceil((1-alpha) B)-th order statistic.
double empirical_upper_quantile(const std::vector<double>& sorted_stats, double alpha);

// Decision and add-one p-value at one alpha from a completed bootstrap pass.
TestReport bootstrap_report(const BootstrapDistribution& dist, double alpha, std::uint64_t seed);

// Fits theta, simulates `bootstrap_reps` series from the fitted null, refits
// and recomputes the statistic on each, and rejects when the data statistic
// exceeds the empirical (1-alpha)-quantile.
TestReport bootstrap_test(const ObservationSeries& series, const ParametricVolModel& model,
                          const NullSimulator& null_simulator, double alpha, int bootstrap_reps,
                          std::uint64_t seed, int parallelism = 0);

} // namespace smgof
