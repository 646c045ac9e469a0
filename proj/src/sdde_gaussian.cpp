#include "entroflow/sdde_gaussian.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "entroflow/detail/piecewise.hpp"
#include "entroflow/ou_process.hpp"
#include "entroflow/parallel.hpp"

namespace entroflow {

namespace {

void require_stable(const DelayParams& p, const char* where) {
  const HayesReport report = hayes_report(p);
  if (report.verdict != Stability::kStable) {
    std::ostringstream msg;
    msg << where << ": no stationary solution, parameters are "
        << to_string(report.verdict) << " (a=" << p.a << ", b=" << p.b
        << ", tau=" << p.tau << ")";
    throw std::domain_error(msg.str());
  }
}

void require_noise(const DelayParams& p, const char* where) {
  if (!(p.sigma > 0.0)) {
    throw std::domain_error(std::string(where) + ": sigma must be > 0");
  }
}

void require_positive_times(std::span<const double> grid, const char* where) {
  validate_grid(grid);
  if (!(grid.front() > 0.0)) {
    throw std::invalid_argument(std::string(where) +
                                ": t = 0 is excluded from the grid (zero variance)");
  }
}

OUParams as_ou(const DelayParams& p) { return OUParams{p.a, p.sigma}; }

}  // namespace

double sdde_variance(const FundamentalSolution& fs, double t) {
  const DelayParams& p = fs.params();
  if (!(t >= 0.0)) throw std::invalid_argument("sdde_variance: t must be >= 0");
  if (p.sigma == 0.0) return 0.0;
  if (p.b == 0.0) return ou_variance(as_ou(p), t);
  return p.sigma * p.sigma * integrate_xx(fs, 0.0, t, 0.0);
}

double sdde_variance(const DelayParams& p, double t) {
  validate(p);
  if (!(t >= 0.0)) throw std::invalid_argument("sdde_variance: t must be >= 0");
  if (t == 0.0) return 0.0;
  return sdde_variance(FundamentalSolution(p, t), t);
}

double sdde_lag_covariance(const FundamentalSolution& fs, double t) {
  const DelayParams& p = fs.params();
  if (t <= p.tau || p.sigma == 0.0) return 0.0;
  return p.sigma * p.sigma * integrate_xx(fs, 0.0, t - p.tau, p.tau);
}

PairLaw pair_law(const FundamentalSolution& fs, const InitialCondition& init, double t) {
  const DelayParams& p = fs.params();
  if (!(t >= 0.0)) throw std::invalid_argument("pair_law: t must be >= 0");
  PairLaw law;
  law.mean = {solution_map(fs, init, t), solution_map_at(fs, init, t, -p.tau)};
  law.degenerate = t <= p.tau;
  law.cov[0][0] = sdde_variance(fs, t);
  if (!law.degenerate) {
    law.cov[1][1] = sdde_variance(fs, t - p.tau);
    law.cov[0][1] = law.cov[1][0] = sdde_lag_covariance(fs, t);
  }
  return law;
}

double conditional_mean(const FundamentalSolution& fs, const InitialCondition& init,
                        double x, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("conditional_mean: t must be > 0");
  const PairLaw law = pair_law(fs, init, t);
  if (!(law.cov[0][0] > 0.0)) {
    throw std::domain_error("conditional_mean: variance of x(t) is zero");
  }
  return law.mean[1] + law.cov[1][0] / law.cov[0][0] * (x - law.mean[0]);
}

double conditional_variance(const FundamentalSolution& fs, double t) {
  const DelayParams& p = fs.params();
  if (!(t > 0.0)) throw std::invalid_argument("conditional_variance: t must be > 0");
  const double v = sdde_variance(fs, t);
  if (!(v > 0.0)) throw std::domain_error("conditional_variance: variance of x(t) is zero");
  if (t <= p.tau) return 0.0;
  const double r = sdde_lag_covariance(fs, t);
  return sdde_variance(fs, t - p.tau) - r * r / v;
}

double StationaryLaw::g1(double t) const {
  switch (regime) {
    case CovarianceRegime::kHyperbolic: return std::cosh(l * t);
    case CovarianceRegime::kCritical: return 1.0;
    case CovarianceRegime::kTrigonometric: return std::cos(l * t);
  }
  return 0.0;
}

double StationaryLaw::g2(double t) const {
  switch (regime) {
    case CovarianceRegime::kHyperbolic: return std::sinh(l * t) / l;
    case CovarianceRegime::kCritical: return t;
    case CovarianceRegime::kTrigonometric: return std::sin(l * t) / l;
  }
  return 0.0;
}

double StationaryLaw::covariance(double t) const {
  return k0 * g1(t) - 0.5 * sigma * sigma * g2(t);
}

StationaryLaw stationary_law(const DelayParams& p) {
  validate(p);
  require_noise(p, "stationary_law");
  require_stable(p, "stationary_law");
  StationaryLaw law;
  law.sigma = p.sigma;
  const double gap = p.a * p.a - p.b * p.b;
  law.l = std::sqrt(std::abs(gap));
  if (std::abs(gap) < kCriticalBand) {
    law.regime = CovarianceRegime::kCritical;
    law.l = 0.0;
  } else {
    law.regime = gap > 0.0 ? CovarianceRegime::kHyperbolic : CovarianceRegime::kTrigonometric;
  }
  const double half_s2 = 0.5 * p.sigma * p.sigma;
  if (p.b == 0.0) {
    law.k0 = ou_stationary(as_ou(p)).variance;
  } else {
    law.k0 = half_s2 * (p.b * law.g2(p.tau) - 1.0) / (p.b * law.g1(p.tau) + p.a);
  }
  law.k_tau = law.covariance(p.tau);
  return law;
}

EntropyCurve entropy_curve_point(const DelayParams& p, const InitialCondition& phi,
                                 std::span<const double> grid, int threads) {
  validate(p);
  validate_history(phi, p.tau);
  require_positive_times(grid, "entropy_curve_point");
  require_noise(p, "entropy_curve_point");
  require_stable(p, "entropy_curve_point");
  if (p.b == 0.0) {
    return ou_entropy_curve_point(as_ou(p), history_value(phi, 0.0), grid);
  }
  const Gaussian1D fstar{0.0, stationary_law(p).k0};
  const FundamentalSolution fs(p, grid.back());
  const std::size_t n = grid.size();
  EntropyCurve curve;
  curve.time.assign(grid.begin(), grid.end());
  curve.mean.resize(n);
  curve.variance.resize(n);
  curve.gibbs.resize(n);
  curve.conditional.resize(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const Gaussian1D law{solution_map(fs, phi, grid[i]), sdde_variance(fs, grid[i])};
    curve.mean[i] = law.mean;
    curve.variance[i] = law.variance;
    curve.gibbs[i] = gibbs_entropy(law);
    curve.conditional[i] = conditional_entropy(law, fstar);
  });
  return curve;
}

double brownian_history_variance(const FundamentalSolution& fs, double sigma_bar,
                                 double t) {
  const DelayParams& p = fs.params();
  if (!(sigma_bar > 0.0)) {
    throw std::invalid_argument("brownian_history_variance: sigma_bar must be > 0");
  }
  if (!(t >= 0.0)) throw std::invalid_argument("brownian_history_variance: t must be >= 0");
  const double noise = sdde_variance(fs, t);
  if (p.a == 0.0) {
    return sigma_bar * sigma_bar * integrate_xx(fs, t, t + p.tau, 0.0) + noise;
  }
  // S_t eta_r(0) = sigma_bar (X(t - r) - a int_t^{t-r} X); integrate its square
  // over r in [-tau, 0], written as v = -r in [0, tau].
  std::vector<double> cuts;
  detail::append_grid_points(cuts, 0.0, p.tau, p.tau, -t);
  const double rate = 2.0 * std::max(std::abs(p.a), std::abs(p.b));
  auto integrand = [&](double v) {
    const double y = fs(t + v) - p.a * integrate_x(fs, t, t + v);
    return y * y;
  };
  return sigma_bar * sigma_bar *
             detail::integrate_piecewise(integrand, 0.0, p.tau, std::move(cuts), rate) +
         noise;
}

EntropyCurve entropy_curve_brownian(const DelayParams& p, double sigma_bar,
                                    std::span<const double> grid, int threads) {
  validate(p);
  if (!(sigma_bar > 0.0)) {
    throw std::invalid_argument("entropy_curve_brownian: sigma_bar must be > 0");
  }
  validate_grid(grid);
  const HayesReport report = hayes_report(p);
  if (report.verdict == Stability::kUnstable) {
    std::ostringstream msg;
    msg << "entropy_curve_brownian: parameters are Unstable (a=" << p.a << ", b=" << p.b
        << ", tau=" << p.tau << ")";
    throw std::domain_error(msg.str());
  }
  const bool stable = report.verdict == Stability::kStable;
  // History value x(0) = sigma_bar W(tau) has variance sigma_bar^2 tau.
  if (p.b == 0.0 && p.sigma > 0.0 && stable) {
    return ou_entropy_curve(as_ou(p), Gaussian1D{0.0, sigma_bar * sigma_bar * p.tau}, grid);
  }

  std::optional<Gaussian1D> fstar;
  if (stable && p.sigma > 0.0) {
    fstar = Gaussian1D{0.0, stationary_law(p).k0};
  } else if (!stable && p.sigma == 0.0) {
    fstar = Gaussian1D{0.0, 1.0};
  }

  const FundamentalSolution fs(p, grid.back() + p.tau);
  const std::size_t n = grid.size();
  EntropyCurve curve;
  curve.time.assign(grid.begin(), grid.end());
  curve.mean.assign(n, 0.0);
  curve.variance.resize(n);
  curve.gibbs.resize(n);
  if (fstar) curve.conditional.resize(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const Gaussian1D law{0.0, brownian_history_variance(fs, sigma_bar, grid[i])};
    curve.variance[i] = law.variance;
    curve.gibbs[i] = gibbs_entropy(law);
    if (fstar) curve.conditional[i] = conditional_entropy(law, *fstar);
  });
  return curve;
}

double entropy_lower_bound(const DelayParams& p, std::span<const WeightedHistory> mu0,
                           double t) {
  validate(p);
  if (mu0.empty()) throw std::invalid_argument("entropy_lower_bound: empty mixture");
  if (!(t > 0.0)) throw std::invalid_argument("entropy_lower_bound: t must be > 0");
  require_noise(p, "entropy_lower_bound");
  const double k0 = stationary_law(p).k0;
  const FundamentalSolution fs(p, std::max(t, p.tau));
  double total_weight = 0.0;
  double second_moment = 0.0;
  for (const auto& item : mu0) {
    if (!(item.weight > 0.0)) {
      throw std::invalid_argument("entropy_lower_bound: weights must be positive");
    }
    const double m = solution_map(fs, item.history, t);
    second_moment += item.weight * m * m;
    total_weight += item.weight;
  }
  if (std::abs(total_weight - 1.0) > 1e-12) {
    throw std::invalid_argument("entropy_lower_bound: weights must sum to 1");
  }
  const double ratio = sdde_variance(fs, t) / k0;
  return 0.5 * std::log(ratio) + 0.5 * (1.0 - ratio) - second_moment / (2.0 * k0);
}

namespace {

void check_fd_step(const DelayParams& p, double t, double h, const char* where) {
  if (!(h >= kMinFpeStep)) {
    std::ostringstream msg;
    msg << where << ": step h = " << h << " is below the minimum " << kMinFpeStep;
    throw std::invalid_argument(msg.str());
  }
  if (!(t - h > p.tau)) {
    throw std::invalid_argument(std::string(where) + ": need t - h > tau");
  }
}

}  // namespace

double fpe_residual(const DelayParams& p, double t, double h) {
  validate(p);
  require_noise(p, "fpe_residual");
  check_fd_step(p, t, h, "fpe_residual");
  const FundamentalSolution fs(p, t + h);
  const double derivative = (sdde_variance(fs, t + h) - sdde_variance(fs, t - h)) / (2.0 * h);
  const double rhs = 2.0 * p.a * sdde_variance(fs, t) +
                     2.0 * p.b * sdde_lag_covariance(fs, t) + p.sigma * p.sigma;
  return derivative - rhs;
}

double fpe_mean_residual(const DelayParams& p, const InitialCondition& phi, double t,
                         double h) {
  validate(p);
  check_fd_step(p, t, h, "fpe_mean_residual");
  const FundamentalSolution fs(p, t + h);
  const double derivative =
      (solution_map(fs, phi, t + h) - solution_map(fs, phi, t - h)) / (2.0 * h);
  const double drift =
      p.a * solution_map(fs, phi, t) + p.b * solution_map_at(fs, phi, t, -p.tau);
  return derivative - drift;
}

}  // namespace entroflow
