#pragma once

#include <cstdint>
#include <stdexcept>
#include <variant>

namespace smgof {

// Uniform observation grid on the unit interval: t_i = i/n for i = 0..n.
struct UniformGrid {
  std::int64_t n = 0; // number of intervals

  explicit UniformGrid(std::int64_t intervals) : n(intervals) {
    if (n < 4) throw std::invalid_argument("UniformGrid: n must be >= 4");
  }

  double time(std::int64_t i) const { return static_cast<double>(i) / static_cast<double>(n); }
  std::int64_t num_points() const { return n + 1; }
};

// Fine grid t'_i = i/n^2 for i = 0..n^2, used by the block observers.
// Every outer time t_j coincides with fine time t'_{n j}.
struct FineGrid {
  std::int64_t n = 0; // outer interval count

  explicit FineGrid(std::int64_t outer) : n(outer) {
    if (n < 4) throw std::invalid_argument("FineGrid: n must be >= 4");
    if (n > 3'000'000) throw std::invalid_argument("FineGrid: n^2 would overflow sensible sizes");
  }

  double time(std::int64_t i) const {
    return static_cast<double>(i) / (static_cast<double>(n) * static_cast<double>(n));
  }
  std::int64_t num_points() const { return n * n + 1; }
  UniformGrid outer() const { return UniformGrid(n); }
};

using AnyGrid = std::variant<UniformGrid, FineGrid>;

inline std::int64_t grid_num_points(const AnyGrid& g) {
  return std::visit([](const auto& gr) { return gr.num_points(); }, g);
}

inline double grid_time(const AnyGrid& g, std::int64_t i) {
  return std::visit([i](const auto& gr) { return gr.time(i); }, g);
}

} // namespace smgof
