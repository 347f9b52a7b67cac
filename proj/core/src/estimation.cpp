#include "smgof/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace smgof {

namespace {

double clamp_to(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

void project(std::vector<double>& theta, std::span<const double> lo, std::span<const double> hi) {
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = clamp_to(theta[i], lo[i], hi[i]);
}

double rss_at(const ObservationSeries& series, const ParametricVolModel& model,
              std::span<const double> theta) {
  double acc = 0.0;
  const std::int64_t n = series.grid.n;
  for (std::int64_t i = 0; i < n; ++i) {
    const double r = series.y[i] - model.mu(theta, series.grid.time(i), series.covariate(i));
    acc += r * r;
  }
  return acc;
}

// Solves the p x p system in place by Gaussian elimination with partial
// pivoting; throws SingularDesignError when a pivot collapses relative to
// the matrix scale.
std::vector<double> solve_normal_equations(std::vector<double> a, std::vector<double> b, int p) {
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) throw SingularDesignError("least squares: zero design matrix");
  for (int col = 0; col < p; ++col) {
    int pivot = col;
    for (int r = col + 1; r < p; ++r)
      if (std::abs(a[r * p + col]) > std::abs(a[pivot * p + col])) pivot = r;
    if (std::abs(a[pivot * p + col]) <= 1e-12 * scale)
      throw SingularDesignError("least squares: rank-deficient design");
    if (pivot != col) {
      for (int c = 0; c < p; ++c) std::swap(a[pivot * p + c], a[col * p + c]);
      std::swap(b[pivot], b[col]);
    }
    for (int r = col + 1; r < p; ++r) {
      const double f = a[r * p + col] / a[col * p + col];
      for (int c = col; c < p; ++c) a[r * p + c] -= f * a[col * p + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(p);
  for (int r = p - 1; r >= 0; --r) {
    double v = b[r];
    for (int c = r + 1; c < p; ++c) v -= a[r * p + c] * x[c];
    x[r] = v / a[r * p + r];
  }
  return x;
}

FitResult fit_linear(const ObservationSeries& series, const ParametricVolModel& model) {
  const int p = model.param_dim;
  const std::int64_t n = series.grid.n;
  std::vector<double> gram(p * p, 0.0), moment(p, 0.0), row(p);
  for (std::int64_t i = 0; i < n; ++i) {
    const double t = series.grid.time(i);
    const auto x = series.covariate(i);
    for (int k = 0; k < p; ++k) row[k] = model.linear_basis[k](t, x);
    for (int r = 0; r < p; ++r) {
      for (int c = r; c < p; ++c) gram[r * p + c] += row[r] * row[c];
      moment[r] += row[r] * series.y[i];
    }
  }
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < r; ++c) gram[r * p + c] = gram[c * p + r];

  FitResult fit;
  fit.theta = solve_normal_equations(std::move(gram), std::move(moment), p);
  const auto lo = model.lower_or_default();
  const auto hi = model.upper_or_default();
  project(fit.theta, lo, hi);
  fit.rss = rss_at(series, model, fit.theta);
  fit.method = FitMethod::ClosedFormLinear;
  fit.converged = true;
  return fit;
}

struct IterativeLeg {
  std::vector<double> theta;
  double rss = std::numeric_limits<double>::infinity();
  bool converged = false;
  int iterations = 0;
};

void fd_gradient(const ObservationSeries& series, const ParametricVolModel& model,
                 std::vector<double>& theta, std::vector<double>& grad) {
  const int p = static_cast<int>(theta.size());
  for (int i = 0; i < p; ++i) {
    const double h = 1e-6 * (1.0 + std::abs(theta[i]));
    const double saved = theta[i];
    theta[i] = saved + h;
    const double fp = rss_at(series, model, theta);
    theta[i] = saved - h;
    const double fm = rss_at(series, model, theta);
    theta[i] = saved;
    grad[i] = (fp - fm) / (2.0 * h);
  }
}

// Projected BFGS with Armijo backtracking from one start point.
IterativeLeg run_leg(const ObservationSeries& series, const ParametricVolModel& model,
                     std::vector<double> theta, std::span<const double> lo,
                     std::span<const double> hi) {
  const int p = static_cast<int>(theta.size());
  constexpr int kMaxIter = 200;

  std::vector<double> hessian_inv(p * p, 0.0);
  for (int i = 0; i < p; ++i) hessian_inv[i * p + i] = 1.0;

  IterativeLeg leg;
  double f = rss_at(series, model, theta);
  std::vector<double> grad(p), dir(p), trial(p), grad_new(p);
  fd_gradient(series, model, theta, grad);

  for (int iter = 0; iter < kMaxIter; ++iter) {
    leg.iterations = iter;
    // Projected gradient: drop components pushing outside an active bound.
    double pg_norm = 0.0;
    for (int i = 0; i < p; ++i) {
      double g = grad[i];
      if ((theta[i] <= lo[i] && g > 0.0) || (theta[i] >= hi[i] && g < 0.0)) g = 0.0;
      pg_norm = std::max(pg_norm, std::abs(g));
    }
    // Gradient tolerance is taken relative to the objective scale; an
    // absolute 1e-8 would sit below the finite-difference noise floor for
    // rss of order n.
    if (pg_norm <= 1e-8 * std::max(1.0, f)) {
      leg.converged = true;
      break;
    }

    double descent = 0.0;
    for (int r = 0; r < p; ++r) {
      double d = 0.0;
      for (int c = 0; c < p; ++c) d -= hessian_inv[r * p + c] * grad[c];
      dir[r] = d;
      descent += d * grad[r];
    }
    if (!(descent < 0.0)) {
      for (int i = 0; i < p * p; ++i) hessian_inv[i] = 0.0;
      for (int i = 0; i < p; ++i) hessian_inv[i * p + i] = 1.0;
      descent = 0.0;
      for (int i = 0; i < p; ++i) {
        dir[i] = -grad[i];
        descent -= grad[i] * grad[i];
      }
    }

    double step = 1.0;
    double f_trial = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (int i = 0; i < p; ++i) trial[i] = clamp_to(theta[i] + step * dir[i], lo[i], hi[i]);
      f_trial = rss_at(series, model, trial);
      if (f_trial <= f + 1e-4 * step * descent) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break; // line search stalled; report the leg as-is

    fd_gradient(series, model, trial, grad_new);

    // BFGS inverse update, skipped when the curvature pair degenerates.
    double sy = 0.0, ss = 0.0, yy = 0.0;
    std::vector<double> s(p), yv(p);
    for (int i = 0; i < p; ++i) {
      s[i] = trial[i] - theta[i];
      yv[i] = grad_new[i] - grad[i];
      sy += s[i] * yv[i];
      ss += s[i] * s[i];
      yy += yv[i] * yv[i];
    }
    if (sy > 1e-12 * std::sqrt(ss * yy)) {
      std::vector<double> hy(p, 0.0);
      double yhy = 0.0;
      for (int r = 0; r < p; ++r) {
        for (int c = 0; c < p; ++c) hy[r] += hessian_inv[r * p + c] * yv[c];
        yhy += yv[r] * hy[r];
      }
      for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c) {
          hessian_inv[r * p + c] += (sy + yhy) * s[r] * s[c] / (sy * sy) -
                                    (hy[r] * s[c] + s[r] * hy[c]) / sy;
        }
    }
    theta = trial;
    f = f_trial;
    grad = grad_new;
  }

  leg.theta = std::move(theta);
  leg.rss = f;
  // Re-check the tolerance at the final point when the loop ran out.
  if (!leg.converged) {
    fd_gradient(series, model, leg.theta, grad);
    double pg_norm = 0.0;
    for (int i = 0; i < p; ++i) {
      double g = grad[i];
      if ((leg.theta[i] <= lo[i] && g > 0.0) || (leg.theta[i] >= hi[i] && g < 0.0)) g = 0.0;
      pg_norm = std::max(pg_norm, std::abs(g));
    }
    leg.converged = pg_norm <= 1e-8 * std::max(1.0, leg.rss);
  }
  return leg;
}

// 8 deterministic starts on a coarse grid of the box: cell midpoints of a
// per-dimension subdivision, first 8 in lexicographic order.
std::vector<std::vector<double>> start_points(std::span<const double> lo,
                                              std::span<const double> hi) {
  const int p = static_cast<int>(lo.size());
  int levels = 8;
  if (p > 1) {
    levels = 1;
    while (std::pow(levels + 1, p) <= 8.0) ++levels;
    levels = std::max(levels, 2);
  }
  std::vector<std::vector<double>> starts;
  std::vector<int> idx(p, 0);
  while (static_cast<int>(starts.size()) < 8) {
    std::vector<double> point(p);
    for (int i = 0; i < p; ++i)
      point[i] = lo[i] + (hi[i] - lo[i]) * (idx[i] + 0.5) / levels;
    starts.push_back(std::move(point));
    int d = p - 1;
    while (d >= 0 && ++idx[d] == levels) idx[d--] = 0;
    if (d < 0) break; // exhausted the grid (possible when levels^p < 8)
  }
  return starts;
}

FitResult fit_iterative(const ObservationSeries& series, const ParametricVolModel& model) {
  const auto lo = model.lower_or_default();
  const auto hi = model.upper_or_default();

  IterativeLeg best;
  bool any = false;
  for (auto& start : start_points(lo, hi)) {
    auto leg = run_leg(series, model, std::move(start), lo, hi);
    if (!leg.converged) continue;
    if (!any) {
      best = std::move(leg);
      any = true;
      continue;
    }
    const double tol = 1e-10 * (1.0 + std::min(best.rss, leg.rss));
    if (leg.rss < best.rss - tol) {
      best = std::move(leg);
    } else if (std::abs(leg.rss - best.rss) <= tol) {
      // Tie-break deterministically: smaller Euclidean norm, then lexicographic.
      double n_leg = 0.0, n_best = 0.0;
      for (double v : leg.theta) n_leg += v * v;
      for (double v : best.theta) n_best += v * v;
      if (n_leg < n_best - 1e-15 || (std::abs(n_leg - n_best) <= 1e-15 && leg.theta < best.theta))
        best = std::move(leg);
    }
  }
  if (!any)
    throw NoConvergenceError("least squares: no multi-start leg met the gradient tolerance");

  FitResult fit;
  fit.theta = std::move(best.theta);
  fit.rss = best.rss;
  fit.method = FitMethod::Iterative;
  fit.converged = true;
  fit.iterations = best.iterations;
  return fit;
}

} // namespace

FitResult fit_least_squares(const ObservationSeries& series, const ParametricVolModel& model) {
  if (!model.mu) throw std::invalid_argument("fit_least_squares: model has no mean handle");
  if (series.grid.n < model.param_dim)
    throw std::invalid_argument("fit_least_squares: fewer observations than parameters");
  for (double v : series.y)
    if (!std::isfinite(v)) throw NonFiniteError("fit_least_squares: Y contains non-finite values");
  if (!model.linear_basis.empty()) return fit_linear(series, model);
  return fit_iterative(series, model);
}

} // namespace smgof
