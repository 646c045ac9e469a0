#ifndef ENTROFLOW_OU_PROCESS_HPP_
#define ENTROFLOW_OU_PROCESS_HPP_

#include <span>
#include <string_view>

#include "entroflow/entropy_curve.hpp"
#include "entroflow/gaussian_entropy.hpp"

namespace entroflow {

// dx = a x dt + sigma dw.
struct OUParams {
  double a = -1.0;
  double sigma = 1.0;
};

void validate(const OUParams& p);

// Below this |2 a t| the integral uses a Taylor expansion instead of expm1.
inline constexpr double kOUSeriesSwitch = 1e-5;

// upsilon(t) = sigma^2 int_0^t e^{2 a r} dr.
double ou_variance(const OUParams& p, double t);

// Law of x(t) given x(0) = x0. Rejects t <= 0 (point mass).
Gaussian1D ou_transition(const OUParams& p, double x0, double t);

// Law of x(t) when x(0) has Gaussian law `init`: mean e^{at} m0 and variance
// e^{2at} var0 + upsilon(t).
Gaussian1D ou_propagate(const OUParams& p, const Gaussian1D& init, double t);

// f_* = N(0, -sigma^2 / (2a)). Throws std::domain_error for a >= 0.
Gaussian1D ou_stationary(const OUParams& p);

// Entropy curve for a Gaussian initial law; H_c is taken against
// ou_stationary. Requires a < 0.
EntropyCurve ou_entropy_curve(const OUParams& p, const Gaussian1D& init,
                              std::span<const double> grid);

// Same for a point initial condition x(0) = x0; every grid time must be > 0.
EntropyCurve ou_entropy_curve_point(const OUParams& p, double x0,
                                    std::span<const double> grid);

enum class GibbsTrend { kIncreasing, kConstant, kDecreasing };

std::string_view to_string(GibbsTrend trend);

// Sign of dH_G/dt, decided by comparing the initial variance with the
// stationary one (relative tolerance 1e-12).
GibbsTrend ou_gibbs_trend(const OUParams& p, double init_variance);

}  // namespace entroflow

#endif  // ENTROFLOW_OU_PROCESS_HPP_
