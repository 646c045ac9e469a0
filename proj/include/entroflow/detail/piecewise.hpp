#ifndef ENTROFLOW_DETAIL_PIECEWISE_HPP_
#define ENTROFLOW_DETAIL_PIECEWISE_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "entroflow/quadrature.hpp"

namespace entroflow::detail {

// Integrates f over [lo, hi] after splitting at the interior breakpoints and
// subdividing every piece so that rate * length <= 1.
template <class F>
double integrate_piecewise(F&& f, double lo, double hi, std::vector<double> cuts,
                           double rate) {
  if (!(hi > lo)) return 0.0;
  cuts.push_back(lo);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  double prev = lo;
  for (double c : cuts) {
    if (c <= prev) continue;
    if (c > hi) break;
    const double len = c - prev;
    const int pieces = std::max(1, static_cast<int>(std::ceil(rate * len)));
    const double step = len / pieces;
    for (int k = 0; k < pieces; ++k) {
      const double a = prev + k * step;
      const double b = (k + 1 == pieces) ? c : prev + (k + 1) * step;
      total += quad::gauss_legendre<16>(f, a, b);
    }
    prev = c;
  }
  return total;
}

// Appends the points k * period + shift lying strictly inside (lo, hi).
inline void append_grid_points(std::vector<double>& cuts, double lo, double hi,
                               double period, double shift) {
  const double first = std::ceil((lo - shift) / period);
  for (double k = first;; k += 1.0) {
    const double x = k * period + shift;
    if (x >= hi) break;
    if (x > lo) cuts.push_back(x);
  }
}

}  // namespace entroflow::detail

#endif  // ENTROFLOW_DETAIL_PIECEWISE_HPP_
