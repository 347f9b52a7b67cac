#include "smgof/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>

namespace smgof {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void write_comments(std::ostream& os, const CsvComments& comments) {
  for (const auto& [key, value] : comments) os << "# " << key << ": " << value << "\n";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s, std::int64_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw BadDataError("csv: bad number '" + s + "' on line " + std::to_string(line_no));
  }
}

} // namespace

void write_path_csv(std::ostream& os, const PathRecord& path, const CsvComments& comments) {
  write_comments(os, comments);
  os << "time";
  for (int c = 0; c < path.components; ++c) {
    if (c < static_cast<int>(path.labels.size()))
      os << "," << path.labels[c];
    else
      os << ",X" << (c + 1);
  }
  os << "\n";
  const std::int64_t points = path.num_points();
  for (std::int64_t i = 0; i < points; ++i) {
    os << format_double(grid_time(path.grid, i));
    for (int c = 0; c < path.components; ++c) os << "," << format_double(path.state(i, c));
    os << "\n";
  }
}

void write_observation_csv(std::ostream& os, const ObservationSeries& series,
                           const CsvComments& comments) {
  write_comments(os, comments);
  os << "t,Y";
  for (int c = 0; c < series.covariate_dim; ++c) os << ",Xhat" << (c + 1);
  os << "\n";
  for (std::int64_t i = 0; i < series.grid.n; ++i) {
    os << format_double(series.grid.time(i)) << "," << format_double(series.y[i]);
    for (double x : series.covariate(i)) os << "," << format_double(x);
    os << "\n";
  }
}

ObservationSeries read_observation_csv(std::istream& is, ModelKind kind) {
  std::string line;
  std::int64_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    header = split_csv_line(line);
    break;
  }
  if (header.size() < 3 || header[0] != "t" || header[1] != "Y" || header[2] != "Xhat1")
    throw BadDataError("csv: expected header t,Y,Xhat1[,Xhat2,...]");
  for (std::size_t c = 2; c < header.size(); ++c)
    if (header[c] != "Xhat" + std::to_string(c - 1))
      throw BadDataError("csv: unexpected column '" + header[c] + "'");
  const int q = static_cast<int>(header.size()) - 2;

  std::vector<double> times, y, xhat;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw BadDataError("csv: wrong field count on line " + std::to_string(line_no));
    times.push_back(parse_double(fields[0], line_no));
    y.push_back(parse_double(fields[1], line_no));
    for (int c = 0; c < q; ++c) xhat.push_back(parse_double(fields[2 + c], line_no));
  }
  const std::int64_t n = static_cast<std::int64_t>(y.size());
  if (n < 4) throw BadDataError("csv: need at least 4 observations");

  ObservationSeries series{UniformGrid(n), kind, q, std::move(y), std::move(xhat)};
  for (std::int64_t i = 0; i < n; ++i)
    if (std::abs(times[i] - series.grid.time(i)) > 1e-9)
      throw BadDataError("csv: t column does not match the uniform grid at row " +
                         std::to_string(i));
  return series;
}

void write_results_csv(std::ostream& os, const std::vector<ScenarioResult>& results,
                       const CsvComments& comments, bool include_timings) {
  write_comments(os, comments);
  os << "block,scenario,n,alpha,rejectionRate,mcStandardError,failCount,wallTimeSec\n";
  for (const auto& r : results) {
    for (std::size_t a = 0; a < r.alpha_levels.size(); ++a) {
      os << "\"" << r.block << "\",\"" << r.name << "\"," << r.n << ","
         << format_double(r.alpha_levels[a]) << "," << format_double(r.rejection_rate[a]) << ","
         << format_double(r.mc_standard_error[a]) << "," << r.fail_count << ","
         << (include_timings ? format_double(r.wall_time_sec) : std::string("0")) << "\n";
    }
  }
}

} // namespace smgof
