#include "entroflow/dde_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "entroflow/detail/piecewise.hpp"

namespace entroflow {

namespace {

using detail::append_grid_points;
using detail::integrate_piecewise;

constexpr double kTrimRelative = 1e-18;

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

void validate(const DelayParams& p) {
  if (!std::isfinite(p.a) || !std::isfinite(p.b)) {
    throw std::invalid_argument("DelayParams: a and b must be finite");
  }
  if (!(p.tau > 0.0) || !std::isfinite(p.tau)) {
    throw std::invalid_argument("DelayParams: tau must be > 0");
  }
  if (!(p.sigma >= 0.0) || !std::isfinite(p.sigma)) {
    throw std::invalid_argument("DelayParams: sigma must be >= 0");
  }
}

FundamentalSolution::FundamentalSolution(const DelayParams& p, double horizon)
    : params_(p), horizon_(horizon) {
  validate(p);
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("fundamental_solution: horizon must be > 0");
  }
  if (horizon / p.tau > kMaxDelayIntervals) {
    std::ostringstream msg;
    msg << "fundamental_solution: horizon/tau = " << horizon / p.tau
        << " exceeds the limit of " << kMaxDelayIntervals << " intervals";
    throw std::invalid_argument(msg.str());
  }

  const std::size_t intervals = static_cast<std::size_t>(std::floor(horizon / p.tau)) + 2;
  const double bt = std::abs(p.b * p.tau);
  const double growth = std::exp(p.a * p.tau);

  std::vector<double> nodes{1.0};        // X(j tau)
  std::vector<double> prefix_max{1.0};   // max_{i <= j} |X(i tau)|
  std::vector<double> b_pow{1.0};        // b^m / m!
  std::vector<double> bt_pow{1.0};       // |b tau|^m / m!
  coeffs_.reserve(intervals);

  for (std::size_t j = 0; j < intervals; ++j) {
    std::vector<double> row;
    double abs_sum = 0.0;
    const std::size_t m_limit = p.b == 0.0 ? 0 : j;
    for (std::size_t m = 0; m <= m_limit; ++m) {
      if (m == b_pow.size()) {
        b_pow.push_back(b_pow.back() * p.b / static_cast<double>(m));
        bt_pow.push_back(bt_pow.back() * bt / static_cast<double>(m));
      }
      row.push_back(nodes[j - m] * b_pow[m]);
      abs_sum += std::abs(nodes[j - m]) * bt_pow[m];
      // Remaining terms are bounded by prefix_max * sum_{m' > m} |b tau|^m'/m'!,
      // which is at most 2 * prefix_max * |b tau|^m / m! once m > 2 |b tau|.
      if (static_cast<double>(m) > 2.0 * bt &&
          prefix_max[j - m] * bt_pow[m] < kTrimRelative * abs_sum) {
        break;
      }
    }
    KahanSum next;
    double power = 1.0;
    for (double c : row) {
      next.add(c * power);
      power *= p.tau;
    }
    nodes.push_back(growth * next.sum);
    prefix_max.push_back(std::max(prefix_max.back(), std::abs(nodes.back())));
    coeffs_.push_back(std::move(row));
  }
}

std::size_t FundamentalSolution::interval_index(double t) const {
  if (t <= 0.0) return 0;
  const double q = t / params_.tau;
  double j = std::floor(q);
  if ((j + 1.0) - q <= 4.0 * std::numeric_limits<double>::epsilon() * (j + 1.0)) {
    j += 1.0;
  }
  const auto idx = static_cast<std::size_t>(j);
  return std::min(idx, coeffs_.size() - 1);
}

double FundamentalSolution::evaluate(std::size_t interval, double s) const {
  KahanSum sum;
  double power = 1.0;
  for (double c : coeffs_[interval]) {
    sum.add(c * power);
    power *= s;
  }
  return std::exp(params_.a * s) * sum.sum;
}

double FundamentalSolution::operator()(double t) const {
  if (t < 0.0) return 0.0;
  if (t > horizon_ * (1.0 + 1e-12) + 1e-300) {
    std::ostringstream msg;
    msg << "FundamentalSolution: t = " << t << " beyond horizon " << horizon_;
    throw std::out_of_range(msg.str());
  }
  const std::size_t j = interval_index(t);
  const double s = std::max(0.0, t - static_cast<double>(j) * params_.tau);
  return evaluate(j, s);
}

double FundamentalSolution::derivative(double t) const {
  return params_.a * (*this)(t) + params_.b * (*this)(t - params_.tau);
}

FundamentalSolution fundamental_solution(const DelayParams& p, double horizon) {
  return FundamentalSolution(p, horizon);
}

double fundamental_series_direct(const DelayParams& p, double t) {
  validate(p);
  if (t < 0.0) return 0.0;
  const auto last = static_cast<std::size_t>(std::floor(t / p.tau));
  KahanSum sum;
  for (std::size_t k = 0; k <= last; ++k) {
    const double s = t - static_cast<double>(k) * p.tau;
    if (s < 0.0) break;
    double term = std::exp(p.a * s);
    if (k > 0) {
      if (p.b == 0.0 || s == 0.0) continue;
      const double log_mag = static_cast<double>(k) * std::log(std::abs(p.b) * s) -
                             std::lgamma(static_cast<double>(k) + 1.0);
      const double sign = (p.b < 0.0 && (k % 2 == 1)) ? -1.0 : 1.0;
      term = sign * std::exp(p.a * s + log_mag);
    }
    sum.add(term);
  }
  return sum.sum;
}

TabulatedHistory::TabulatedHistory(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.size() < 2 || knots_.size() != values_.size()) {
    throw std::invalid_argument(
        "TabulatedHistory: need at least two knots and one value per knot");
  }
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i]) || !std::isfinite(values_[i])) {
      throw std::invalid_argument("TabulatedHistory: non-finite entry");
    }
    if (i > 0 && !(knots_[i] > knots_[i - 1])) {
      throw std::invalid_argument("TabulatedHistory: knots must be strictly increasing");
    }
  }
}

void TabulatedHistory::check_span(double tau) const {
  const double slack = 1e-12 * std::max(1.0, tau);
  if (std::abs(knots_.front() + tau) > slack || std::abs(knots_.back()) > slack) {
    std::ostringstream msg;
    msg << "TabulatedHistory: knots must span exactly [-tau, 0] = [" << -tau
        << ", 0], got [" << knots_.front() << ", " << knots_.back() << "]";
    throw std::invalid_argument(msg.str());
  }
}

double TabulatedHistory::operator()(double s) const {
  if (s <= knots_.front()) return values_.front();
  if (s >= knots_.back()) return values_.back();
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - knots_.begin());
  const double w = (s - knots_[i - 1]) / (knots_[i] - knots_[i - 1]);
  return (1.0 - w) * values_[i - 1] + w * values_[i];
}

double history_value(const InitialCondition& init, double s) {
  if (const auto* point = std::get_if<PointHistory>(&init)) return point->value;
  if (const auto* table = std::get_if<TabulatedHistory>(&init)) return (*table)(s);
  throw std::domain_error(
      "BrownianHistory is random; its law is handled by the Gaussian SDDE module");
}

void validate_history(const InitialCondition& init, double tau) {
  if (const auto* point = std::get_if<PointHistory>(&init)) {
    if (!std::isfinite(point->value)) {
      throw std::invalid_argument("PointHistory: value must be finite");
    }
    return;
  }
  if (const auto* table = std::get_if<TabulatedHistory>(&init)) {
    table->check_span(tau);
    return;
  }
  throw std::domain_error(
      "BrownianHistory is random; a non-random initial history is required");
}

double solution_map(const FundamentalSolution& fs, const InitialCondition& init,
                    double t) {
  const DelayParams& p = fs.params();
  validate_history(init, p.tau);
  if (!(t >= 0.0)) throw std::invalid_argument("solution_map: t must be >= 0");
  const double head = fs(t) * history_value(init, 0.0);
  if (p.b == 0.0) return head;
  // X(t - r - tau) vanishes for r > t - tau.
  const double lo = -p.tau;
  const double hi = std::min(0.0, t - p.tau);
  if (!(hi > lo)) return head;
  std::vector<double> cuts;
  append_grid_points(cuts, lo, hi, p.tau, t - p.tau);
  if (const auto* table = std::get_if<TabulatedHistory>(&init)) {
    for (double k : table->knots()) {
      if (k > lo && k < hi) cuts.push_back(k);
    }
  }
  const double rate = std::max(std::abs(p.a), std::abs(p.b));
  auto integrand = [&](double r) {
    return fs(t - r - p.tau) * history_value(init, r);
  };
  return head + p.b * integrate_piecewise(integrand, lo, hi, std::move(cuts), rate);
}

double solution_map(const DelayParams& p, const InitialCondition& init, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("solution_map: t must be >= 0");
  const FundamentalSolution fs(p, std::max(t, p.tau));
  return solution_map(fs, init, t);
}

double solution_map_at(const FundamentalSolution& fs, const InitialCondition& init,
                       double t, double s) {
  const double tau = fs.params().tau;
  if (!(s >= -tau * (1.0 + 1e-15)) || s > 0.0) {
    throw std::invalid_argument("solution_map_at: s must lie in [-tau, 0]");
  }
  if (t + s < 0.0) {
    validate_history(init, tau);
    return history_value(init, t + s);
  }
  return solution_map(fs, init, t + s);
}

double integrate_xx(const FundamentalSolution& fs, double t_lo, double t_hi,
                    double lag) {
  const DelayParams& p = fs.params();
  const double slack = 1e-12 * std::max(1.0, fs.horizon());
  if (!(lag >= 0.0) || !(t_lo >= 0.0) || !(t_hi >= t_lo) ||
      t_hi + lag > fs.horizon() + slack) {
    std::ostringstream msg;
    msg << "integrate_xx: need 0 <= t_lo <= t_hi <= horizon - lag (t_lo=" << t_lo
        << ", t_hi=" << t_hi << ", lag=" << lag << ", horizon=" << fs.horizon() << ")";
    throw std::out_of_range(msg.str());
  }
  if (t_hi == t_lo) return 0.0;
  std::vector<double> cuts;
  append_grid_points(cuts, t_lo, t_hi, p.tau, 0.0);
  if (lag > 0.0) append_grid_points(cuts, t_lo, t_hi, p.tau, -lag);
  const double rate = 2.0 * std::max(std::abs(p.a), std::abs(p.b));
  auto integrand = [&](double q) { return fs(q) * fs(q + lag); };
  return integrate_piecewise(integrand, t_lo, t_hi, std::move(cuts), rate);
}

double integrate_x(const FundamentalSolution& fs, double t_lo, double t_hi) {
  const DelayParams& p = fs.params();
  if (!(t_lo >= 0.0) || !(t_hi >= t_lo) ||
      t_hi > fs.horizon() * (1.0 + 1e-12)) {
    throw std::out_of_range("integrate_x: need 0 <= t_lo <= t_hi <= horizon");
  }
  std::vector<double> cuts;
  append_grid_points(cuts, t_lo, t_hi, p.tau, 0.0);
  const double rate = std::max(std::abs(p.a), std::abs(p.b));
  return integrate_piecewise([&](double q) { return fs(q); }, t_lo, t_hi,
                             std::move(cuts), rate);
}

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::kStable: return "Stable";
    case Stability::kUnstable: return "Unstable";
    case Stability::kMarginal: return "Marginal";
  }
  return "?";
}

double hayes_kappa(double a_tau) {
  if (a_tau == 0.0) return std::numbers::pi / 2.0;
  // Roots of kappa cos(kappa) - a_tau sin(kappa), which avoids the pole of tan.
  auto f = [a_tau](double k) { return k * std::cos(k) - a_tau * std::sin(k); };
  double lo = a_tau > 0.0 ? 0.0 : std::numbers::pi / 2.0;
  double hi = a_tau > 0.0 ? std::numbers::pi / 2.0 : std::numbers::pi;
  // f >= 0 at lo, f < 0 at hi.
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (f(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

HayesReport hayes_report(const DelayParams& p) {
  validate(p);
  HayesReport r;
  const double at = p.a * p.tau;
  const double bt = p.b * p.tau;
  r.kappa = hayes_kappa(at);
  r.margin_a = 1.0 - at;
  r.margin_sum = -(bt + at);
  r.margin_third = bt + at * std::cos(r.kappa) + r.kappa * std::sin(r.kappa);
  const double margins[] = {r.margin_a, r.margin_sum, r.margin_third};
  bool marginal = false;
  for (double m : margins) {
    if (m < -kMarginalBand) {
      r.verdict = Stability::kUnstable;
      return r;
    }
    if (std::abs(m) <= kMarginalBand) marginal = true;
  }
  r.verdict = marginal ? Stability::kMarginal : Stability::kStable;
  return r;
}

Stability hayes_stable(const DelayParams& p) { return hayes_report(p).verdict; }

}  // namespace entroflow
