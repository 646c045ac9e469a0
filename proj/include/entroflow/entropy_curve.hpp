#ifndef ENTROFLOW_ENTROPY_CURVE_HPP_
#define ENTROFLOW_ENTROPY_CURVE_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace entroflow {

// Per-time Gaussian law of x(t) and its entropies. `conditional` is empty when
// no stationary density exists to compare against.
struct EntropyCurve {
  std::vector<double> time;
  std::vector<double> mean;
  std::vector<double> variance;
  std::vector<double> gibbs;
  std::vector<double> conditional;

  std::size_t size() const { return time.size(); }
  bool has_conditional() const { return !conditional.empty(); }
};

// `points` uniform times t_max * i / points, i = 1..points (zero excluded).
std::vector<double> uniform_grid_open(double t_max, std::size_t points);

// `points` uniform times on [0, t_max], both ends included.
std::vector<double> uniform_grid_closed(double t_max, std::size_t points);

// Throws std::invalid_argument unless the grid is strictly increasing and
// non-negative.
void validate_grid(std::span<const double> grid);

// Indices i at which values[i] is a strict local extremum: the sign of the
// finite differences flips, counting only differences larger than threshold
// in magnitude.
std::vector<std::size_t> strict_local_extrema(std::span<const double> values,
                                              double threshold = 1e-9);

inline bool has_strict_local_extremum(std::span<const double> values,
                                      double threshold = 1e-9) {
  return !strict_local_extrema(values, threshold).empty();
}

}  // namespace entroflow

#endif  // ENTROFLOW_ENTROPY_CURVE_HPP_
