#include "smgof/hypothesis.hpp"

#include <algorithm>
#include <cmath>

#include "smgof/parallel.hpp"

namespace smgof {

std::string to_string(TestMethod method) {
  return method == TestMethod::Asymptotic ? "asymptotic" : "bootstrap";
}

double test_statistic(const ObservationSeries& series, const ParametricVolModel& model,
                      std::vector<double>* theta_out) {
  const FitResult fit = fit_least_squares(series, model);
  if (theta_out) *theta_out = fit.theta;
  const NormalisedSeries zs = normalise(series, model, fit.theta);
  const int level = resolution_level(series.grid.n);
  auto dec = fast_haar_transform(scaling_coefficients(zs, level));
  return max_statistic(dec);
}

TestReport asymptotic_test_z(const NormalisedSeries& zs, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("asymptotic_test_z: alpha must lie in (0,1)");
  const std::int64_t n = zs.grid.n;
  const int level = resolution_level(n);
  auto dec = fast_haar_transform(scaling_coefficients(zs, level));

  TestReport report;
  report.method = TestMethod::Asymptotic;
  report.alpha = alpha;
  report.n = n;
  report.level = level;
  report.theta_hat = zs.theta;
  report.statistic = max_statistic(dec);
  report.scaled_statistic = std::sqrt(static_cast<double>(n)) * report.statistic;
  const GumbelConstants c = gumbel_constants(level);
  report.critical_value = gumbel_quantile(c, alpha);
  report.p_value = gumbel_p_value(c, report.scaled_statistic);
  report.reject = report.scaled_statistic > report.critical_value;
  return report;
}

TestReport asymptotic_test(const ObservationSeries& series, const ParametricVolModel& model,
                           double alpha) {
  if (series.grid.n < 16)
    throw std::invalid_argument("asymptotic_test: n must be >= 16");
  const FitResult fit = fit_least_squares(series, model);
  const NormalisedSeries zs = normalise(series, model, fit.theta);
  return asymptotic_test_z(zs, alpha);
}

BootstrapDistribution bootstrap_distribution(const ObservationSeries& series,
                                             const ParametricVolModel& model,
                                             const NullSimulator& null_simulator,
                                             int bootstrap_reps, std::uint64_t seed,
                                             int parallelism) {
  if (bootstrap_reps < 1)
    throw std::invalid_argument("bootstrap_distribution: bootstrap_reps must be >= 1");
  if (!null_simulator)
    throw std::invalid_argument("bootstrap_distribution: missing null simulator");

  BootstrapDistribution dist;
  dist.n = series.grid.n;
  dist.level = resolution_level(dist.n);
  dist.statistic = test_statistic(series, model, &dist.theta_hat);

  std::vector<double> stats(bootstrap_reps);
  std::vector<char> ok(bootstrap_reps, 0);
  const std::span<const double> theta{dist.theta_hat};
  parallel_for(bootstrap_reps, parallelism, [&](std::int64_t j) {
    try {
      const ObservationSeries boot = null_simulator(theta, derive_seed(seed, j));
      stats[j] = test_statistic(boot, model, nullptr);
      ok[j] = 1;
    } catch (const Error&) {
      ok[j] = 0; // counted below; >10% aborts
    }
  });

  for (int j = 0; j < bootstrap_reps; ++j)
    if (ok[j]) dist.sorted_stats.push_back(stats[j]);
  dist.failures = bootstrap_reps - static_cast<int>(dist.sorted_stats.size());
  if (10 * dist.failures > bootstrap_reps)
    throw BootstrapDegenerateError("bootstrap: " + std::to_string(dist.failures) + " of " +
                                   std::to_string(bootstrap_reps) +
                                   " replications failed estimation");
  std::sort(dist.sorted_stats.begin(), dist.sorted_stats.end());
  return dist;
}

double empirical_upper_quantile(const std::vector<double>& sorted_stats, double alpha) {
  const std::int64_t b = static_cast<std::int64_t>(sorted_stats.size());
  if (b == 0) throw std::invalid_argument("empirical_upper_quantile: empty sample");
  std::int64_t rank = static_cast<std::int64_t>(std::ceil((1.0 - alpha) * static_cast<double>(b)));
  rank = std::clamp<std::int64_t>(rank, 1, b);
  return sorted_stats[rank - 1];
}

TestReport bootstrap_report(const BootstrapDistribution& dist, double alpha, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("bootstrap_report: alpha must lie in (0,1)");
  TestReport report;
  report.method = TestMethod::Bootstrap;
  report.alpha = alpha;
  report.n = dist.n;
  report.level = dist.level;
  report.theta_hat = dist.theta_hat;
  report.seeds = {seed};
  report.bootstrap_reps = static_cast<int>(dist.sorted_stats.size());
  report.statistic = dist.statistic;
  report.scaled_statistic = std::sqrt(static_cast<double>(dist.n)) * dist.statistic;
  report.critical_value = empirical_upper_quantile(dist.sorted_stats, alpha);
  report.reject = dist.statistic > report.critical_value;

  // Add-one convention keeps the p-value away from exact zero.
  std::int64_t geq = 0;
  for (auto it = dist.sorted_stats.rbegin(); it != dist.sorted_stats.rend(); ++it) {
    if (*it >= dist.statistic)
      ++geq;
    else
      break;
  }
  report.p_value = static_cast<double>(1 + geq) / static_cast<double>(report.bootstrap_reps + 1);
  return report;
}

TestReport bootstrap_test(const ObservationSeries& series, const ParametricVolModel& model,
                          const NullSimulator& null_simulator, double alpha, int bootstrap_reps,
                          std::uint64_t seed, int parallelism) {
  const auto dist =
      bootstrap_distribution(series, model, null_simulator, bootstrap_reps, seed, parallelism);
  return bootstrap_report(dist, alpha, seed);
}

} // namespace smgof
