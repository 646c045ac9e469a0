#ifndef ENTROFLOW_QUADRATURE_HPP_
#define ENTROFLOW_QUADRATURE_HPP_

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace entroflow::quad {

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
template <int N>
struct GaussLegendreRule {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};

  GaussLegendreRule() {
    for (int i = 0; i < (N + 1) / 2; ++i) {
      // Chebyshev-like initial guess, then Newton on P_N.
      double x = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= N; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = N * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      nodes[i] = -x;
      nodes[N - 1 - i] = x;
      weights[i] = w;
      weights[N - 1 - i] = w;
    }
  }
};

template <int N>
const GaussLegendreRule<N>& gauss_legendre_rule() {
  static const GaussLegendreRule<N> rule;
  return rule;
}

// Fixed-order Gauss-Legendre on [lo, hi].
template <int N = 16, class F>
double gauss_legendre(F&& f, double lo, double hi) {
  const auto& rule = gauss_legendre_rule<N>();
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double sum = 0.0;
  for (int i = 0; i < N; ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved_error() const { return achieved_; }

 private:
  double achieved_;
};

// Adaptive composite Gauss-Legendre (order 16). Each interval is accepted when
// its two-halves refinement agrees with the parent to within its share of tol.
template <class F>
QuadratureResult adaptive_gauss_legendre(F&& f, double lo, double hi,
                                         double tol,
                                         std::size_t max_intervals = 20000) {
  struct Piece {
    double lo, hi, whole;
  };
  QuadratureResult result;
  if (hi == lo) {
    result.converged = true;
    return result;
  }
  const double total = std::abs(hi - lo);
  std::vector<Piece> stack;
  stack.push_back({lo, hi, gauss_legendre<16>(f, lo, hi)});
  std::size_t evaluated = 1;
  result.converged = true;
  while (!stack.empty()) {
    const Piece piece = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (piece.lo + piece.hi);
    const double left = gauss_legendre<16>(f, piece.lo, mid);
    const double right = gauss_legendre<16>(f, mid, piece.hi);
    evaluated += 2;
    const double err = std::abs(left + right - piece.whole);
    const double share = tol * std::abs(piece.hi - piece.lo) / total;
    if (err <= share || mid == piece.lo || mid == piece.hi) {
      result.value += left + right;
      result.error_estimate += err;
    } else if (evaluated >= max_intervals) {
      result.value += left + right;
      result.error_estimate += err;
      result.converged = false;
    } else {
      stack.push_back({piece.lo, mid, left});
      stack.push_back({mid, piece.hi, right});
    }
  }
  return result;
}

}  // namespace entroflow::quad

#endif  // ENTROFLOW_QUADRATURE_HPP_
