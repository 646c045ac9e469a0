#ifndef ENTROFLOW_DDE_KERNEL_HPP_
#define ENTROFLOW_DDE_KERNEL_HPP_

#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace entroflow {

// dx = (a x(t) + b x(t - tau)) dt + sigma dw. sigma = 0 is the deterministic
// delay equation.
struct DelayParams {
  double a = 0.0;
  double b = -1.0;
  double tau = 1.0;
  double sigma = 0.0;
};

void validate(const DelayParams& p);

// Largest accepted horizon / tau.
inline constexpr double kMaxDelayIntervals = 1e6;

// Fundamental solution X(t) of x' = a x + b x(t - tau), X = 0 on [-tau, 0),
// X(0) = 1.
//
// On the interval [j tau, (j+1) tau) with local time s = t - j tau,
//
//   X(t) = e^{a s} sum_{m=0}^{j} X((j-m) tau) b^m s^m / m!,
//
// which is the closed-form series regrouped per interval. The node values
// X(j tau) come from the same relation at s = tau. Each interval keeps its own
// coefficient table, trimmed once the remaining terms fall below 1e-18 of the
// magnitude already summed. Unlike the raw series this stays accurate far out
// in t, where the raw terms grow like e^{|b| t} and cancel.
//
// Immutable after construction; safe to share between threads.
class FundamentalSolution {
 public:
  FundamentalSolution(const DelayParams& p, double horizon);

  const DelayParams& params() const { return params_; }
  double horizon() const { return horizon_; }

  // X(t) for t in [-tau, horizon] (t < 0 gives 0).
  double operator()(double t) const;

  // aX(t) + bX(t - tau); one-sided from the right at multiples of tau.
  double derivative(double t) const;

  // Index j with t in [j tau, (j+1) tau), guarded against t/tau landing just
  // below an integer through rounding.
  std::size_t interval_index(double t) const;

  std::size_t interval_count() const { return coeffs_.size(); }
  std::span<const double> coefficients(std::size_t interval) const {
    return coeffs_[interval];
  }

 private:
  double evaluate(std::size_t interval, double s) const;

  DelayParams params_;
  double horizon_;
  std::vector<std::vector<double>> coeffs_;
};

// Throws std::invalid_argument for horizon <= 0 and horizon / tau > 1e6.
FundamentalSolution fundamental_solution(const DelayParams& p, double horizon);

// Term-by-term summation of sum_{k=0}^{floor(t/tau)} e^{a(t-k tau)} b^k
// (t - k tau)^k / k!, ascending in k with Kahan compensation. Accurate only
// while e^{|b| t} stays moderate; kept as a cross-check for the tables.
double fundamental_series_direct(const DelayParams& p, double t);

// Initial histories on [-tau, 0].
struct PointHistory {
  double value = 1.0;
};

// Piecewise-linear history through (knot, value) pairs; knots must be strictly
// increasing and span exactly [-tau, 0].
class TabulatedHistory {
 public:
  TabulatedHistory(std::vector<double> knots, std::vector<double> values);

  double operator()(double s) const;
  std::span<const double> knots() const { return knots_; }
  std::span<const double> values() const { return values_; }
  void check_span(double tau) const;

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
};

// xi(s) = sigma_bar W(s + tau): scaled Brownian motion started at s = -tau.
struct BrownianHistory {
  double sigma_bar = 1.0;
};

using InitialCondition = std::variant<PointHistory, TabulatedHistory, BrownianHistory>;

// phi(s) for a non-random history. Throws std::domain_error for
// BrownianHistory.
double history_value(const InitialCondition& init, double s);

// Throws unless init is a non-random history valid for this tau.
void validate_history(const InitialCondition& init, double tau);

// S_t phi(0) = X(t) phi(0) + b int_{-tau}^0 X(t - r - tau) phi(r) dr. The
// integral is split at the kinks of X and at tabulated knots.
double solution_map(const FundamentalSolution& fs, const InitialCondition& init,
                    double t);
double solution_map(const DelayParams& p, const InitialCondition& init, double t);

// S_t phi(s) for s in [-tau, 0]: phi(t + s) while t + s < 0, otherwise
// S_{t+s} phi(0).
double solution_map_at(const FundamentalSolution& fs, const InitialCondition& init,
                       double t, double s);

// int_{t_lo}^{t_hi} X(q) X(q + lag) dq with 16-point Gauss-Legendre on every
// smooth piece (split at multiples of tau and their lag shifts).
double integrate_xx(const FundamentalSolution& fs, double t_lo, double t_hi,
                    double lag);

// int_{t_lo}^{t_hi} X(q) dq.
double integrate_x(const FundamentalSolution& fs, double t_lo, double t_hi);

enum class Stability { kStable, kUnstable, kMarginal };

std::string_view to_string(Stability s);

struct HayesReport {
  Stability verdict = Stability::kUnstable;
  double kappa = 0.0;
  // Left minus right side of a tau < 1, b tau + a tau < 0 and
  // b tau + a tau cos(kappa) + kappa sin(kappa) > 0, oriented so that a
  // positive margin means the inequality holds.
  double margin_a = 0.0;
  double margin_sum = 0.0;
  double margin_third = 0.0;
};

// Within this distance of equality a condition counts as marginal.
inline constexpr double kMarginalBand = 1e-9;

// Root of kappa = a tau tan(kappa) on (0, pi); pi/2 when a = 0. Only meaningful
// for a tau < 1.
double hayes_kappa(double a_tau);

HayesReport hayes_report(const DelayParams& p);
Stability hayes_stable(const DelayParams& p);

}  // namespace entroflow

#endif  // ENTROFLOW_DDE_KERNEL_HPP_
