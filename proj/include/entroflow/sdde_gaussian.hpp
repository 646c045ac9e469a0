#ifndef ENTROFLOW_SDDE_GAUSSIAN_HPP_
#define ENTROFLOW_SDDE_GAUSSIAN_HPP_

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "entroflow/dde_kernel.hpp"
#include "entroflow/entropy_curve.hpp"
#include "entroflow/gaussian_entropy.hpp"

namespace entroflow {

// Variance of x(t) started from a non-random history:
// upsilon(t) = sigma^2 int_0^t X^2. Uses the exact OU expression when b = 0.
double sdde_variance(const FundamentalSolution& fs, double t);
double sdde_variance(const DelayParams& p, double t);

// r_t(-tau, 0) = sigma^2 int_0^{t - tau} X(q) X(q + tau) dq, zero for t <= tau.
double sdde_lag_covariance(const FundamentalSolution& fs, double t);

// Joint law of (x(t), x(t - tau)).
struct PairLaw {
  std::array<double, 2> mean{};
  std::array<std::array<double, 2>, 2> cov{};
  // Set for t <= tau, where the covariance is singular by construction.
  bool degenerate = false;

  double determinant() const { return cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0]; }
};

PairLaw pair_law(const FundamentalSolution& fs, const InitialCondition& init, double t);

// Mean of x(t - tau) given x(t) = x:
// S_t phi(-tau) + r_t(-tau, 0) / upsilon(t) * (x - S_t phi(0)).
double conditional_mean(const FundamentalSolution& fs, const InitialCondition& init,
                        double x, double t);

// Variance of x(t - tau) given x(t); independent of x.
double conditional_variance(const FundamentalSolution& fs, double t);

enum class CovarianceRegime { kHyperbolic, kCritical, kTrigonometric };

// Below this |a^2 - b^2| the critical-regime formulas (g1 = 1, g2 = t) apply.
inline constexpr double kCriticalBand = 1e-10;

// Stationary covariance K(t) = K0 g1(t) - sigma^2/2 g2(t) on [0, tau].
struct StationaryLaw {
  double k0 = 0.0;
  double k_tau = 0.0;
  double l = 0.0;
  double sigma = 0.0;
  CovarianceRegime regime = CovarianceRegime::kCritical;

  double g1(double t) const;
  double g2(double t) const;
  double covariance(double t) const;
};

// Closed-form stationary law. Throws std::domain_error unless the parameters
// are Hayes-stable and sigma > 0.
StationaryLaw stationary_law(const DelayParams& p);

// Entropy curve for a non-random history. Requires stable parameters,
// sigma > 0 and grid times > 0. Grid points are evaluated in parallel.
EntropyCurve entropy_curve_point(const DelayParams& p, const InitialCondition& phi,
                                 std::span<const double> grid, int threads = 0);

// Variance of x(t) when the history is sigma_bar W(s + tau):
//
//   sigma_bar^2 int_0^tau (X(t + v) - a int_t^{t+v} X)^2 dv + upsilon(t).
//
// For a = 0 the inner integral vanishes, giving
// sigma_bar^2 int_t^{t+tau} X^2 + upsilon(t).
double brownian_history_variance(const FundamentalSolution& fs, double sigma_bar,
                                 double t);

// Entropy curve for a Brownian history (zero mean). H_c is present when a
// stationary density exists: stable with sigma > 0 (f_* = N(0, K0)), or
// marginal with sigma = 0 (f_* = N(0, 1)).
EntropyCurve entropy_curve_brownian(const DelayParams& p, double sigma_bar,
                                    std::span<const double> grid, int threads = 0);

struct WeightedHistory {
  double weight = 1.0;
  InitialCondition history;
};

// Jensen lower bound on H_c for a finite mixture of non-random histories.
double entropy_lower_bound(const DelayParams& p, std::span<const WeightedHistory> mu0,
                           double t);

// Smallest accepted finite-difference step.
inline constexpr double kMinFpeStep = 1e-8;

// d upsilon/dt - [2 a upsilon + 2 b r_t(-tau, 0) + sigma^2] with a central
// difference of step h. Requires sigma > 0 and t - h > tau.
double fpe_residual(const DelayParams& p, double t, double h);

// d/dt S_t phi(0) - [a S_t phi(0) + b S_t phi(-tau)], the drift half of the
// same identity, by central difference.
double fpe_mean_residual(const DelayParams& p, const InitialCondition& phi, double t,
                         double h);

}  // namespace entroflow

#endif  // ENTROFLOW_SDDE_GAUSSIAN_HPP_
