#include "entroflow/entropy_curve.hpp"

#include <cmath>
#include <stdexcept>

namespace entroflow {

std::vector<double> uniform_grid_open(double t_max, std::size_t points) {
  if (!(t_max > 0.0) || points == 0) {
    throw std::invalid_argument("uniform_grid_open: need t_max > 0 and points >= 1");
  }
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = t_max * static_cast<double>(i + 1) / static_cast<double>(points);
  }
  return grid;
}

std::vector<double> uniform_grid_closed(double t_max, std::size_t points) {
  if (!(t_max > 0.0) || points < 2) {
    throw std::invalid_argument("uniform_grid_closed: need t_max > 0 and points >= 2");
  }
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = t_max * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

void validate_grid(std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("time grid is empty");
  if (!(grid[0] >= 0.0) || !std::isfinite(grid[0])) {
    throw std::invalid_argument("time grid must be non-negative");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1]) || !std::isfinite(grid[i])) {
      throw std::invalid_argument("time grid must be strictly increasing");
    }
  }
}

std::vector<std::size_t> strict_local_extrema(std::span<const double> values,
                                              double threshold) {
  std::vector<std::size_t> extrema;
  int last_sign = 0;
  std::size_t last_index = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double d = values[i] - values[i - 1];
    if (std::abs(d) <= threshold) continue;
    const int sign = d > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) extrema.push_back(last_index);
    last_sign = sign;
    last_index = i;
  }
  return extrema;
}

}  // namespace entroflow
