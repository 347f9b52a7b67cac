#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "smgof/harness.hpp"
#include "smgof/model.hpp"
#include "smgof/simulate.hpp"

namespace smgof {

// 17 significant digits: enough for exact double round-trips.
std::string format_double(double v);

// Leading "# key: value" lines carried by every CSV so runs are
// self-describing; readers skip them.
using CsvComments = std::vector<std::pair<std::string, std::string>>;

void write_path_csv(std::ostream& os, const PathRecord& path, const CsvComments& comments);

void write_observation_csv(std::ostream& os, const ObservationSeries& series,
                           const CsvComments& comments);

// Expects columns t, Y, Xhat1[, Xhat2, ...]; `#` lines are ignored. The row
// count defines n and the t column must match the uniform grid.
ObservationSeries read_observation_csv(std::istream& is, ModelKind kind);

void write_results_csv(std::ostream& os, const std::vector<ScenarioResult>& results,
                       const CsvComments& comments, bool include_timings);

} // namespace smgof
