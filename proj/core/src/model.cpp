#include "smgof/model.hpp"

#include <cmath>

namespace smgof {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::LocalVol: return "localvol";
    case ModelKind::Jumps: return "jumps";
    case ModelKind::Microstructure: return "microstructure";
    case ModelKind::StochVol: return "stochvol";
  }
  return "localvol";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "localvol") return ModelKind::LocalVol;
  if (name == "jumps") return ModelKind::Jumps;
  if (name == "microstructure") return ModelKind::Microstructure;
  if (name == "stochvol") return ModelKind::StochVol;
  throw BadDataError("unknown model kind: " + name);
}

NormalisedSeries normalise(const ObservationSeries& series, const ParametricVolModel& model,
                           std::span<const double> theta) {
  const std::int64_t n = series.grid.n;
  NormalisedSeries out{series.grid, {}, {theta.begin(), theta.end()}};
  out.z.resize(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const double t = series.grid.time(i);
    const auto x = series.covariate(i);
    if (!std::isfinite(series.y[i]))
      throw NonFiniteError("normalise: Y[" + std::to_string(i) + "] is not finite");
    for (double xc : x)
      if (!std::isfinite(xc))
        throw NonFiniteError("normalise: Xhat[" + std::to_string(i) + "] is not finite");
    const double var = model.sigma2(theta, t, x);
    if (!(var > 0.0))
      throw NonPositiveVarianceError("normalise: sigma2 <= 0 at grid index " + std::to_string(i));
    out.z[i] = (series.y[i] - model.mu(theta, t, x)) / std::sqrt(var);
  }
  return out;
}

} // namespace smgof
