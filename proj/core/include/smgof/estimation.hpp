#pragma once

#include <vector>

#include "smgof/model.hpp"

namespace smgof {

enum class FitMethod { ClosedFormLinear, Iterative };

struct FitResult {
  std::vector<double> theta;
  double rss = 0.0;
  FitMethod method = FitMethod::ClosedFormLinear;
  bool converged = false;
  int iterations = 0;
};

// Least-squares estimate of theta: argmin over the parameter box of
// sum_i (Y_i - mu(theta, t_i, Xhat_i))^2.
//
// Models declaring linearity (model.linear_basis set) are solved through the
// normal equations; otherwise a multi-start projected quasi-Newton search
// runs from 8 starts on a coarse grid of the box. Equal-rss minima are
// tie-broken by smallest Euclidean norm.
FitResult fit_least_squares(const ObservationSeries& series, const ParametricVolModel& model);

} // namespace smgof
