#include "entroflow/ou_process.hpp"

#include <cmath>
#include <stdexcept>

namespace entroflow {

void validate(const OUParams& p) {
  if (!std::isfinite(p.a)) throw std::invalid_argument("OUParams: a is not finite");
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) {
    throw std::invalid_argument("OUParams: sigma must be > 0");
  }
}

double ou_variance(const OUParams& p, double t) {
  validate(p);
  if (!(t >= 0.0)) throw std::invalid_argument("ou_variance: t must be >= 0");
  const double s2 = p.sigma * p.sigma;
  const double x = 2.0 * p.a * t;
  if (std::abs(x) < kOUSeriesSwitch) {
    // (e^x - 1)/x = 1 + x/2 + x^2/6 + O(x^3)
    return s2 * t * (1.0 + x / 2.0 + x * x / 6.0);
  }
  return s2 * std::expm1(x) / (2.0 * p.a);
}

Gaussian1D ou_transition(const OUParams& p, double x0, double t) {
  if (!(t > 0.0)) {
    throw std::domain_error("ou_transition: t must be > 0 (point mass at t = 0)");
  }
  return Gaussian1D{std::exp(p.a * t) * x0, ou_variance(p, t)};
}

Gaussian1D ou_propagate(const OUParams& p, const Gaussian1D& init, double t) {
  validate(init);
  const double decay = std::exp(p.a * t);
  return Gaussian1D{decay * init.mean,
                    decay * decay * init.variance + ou_variance(p, t)};
}

Gaussian1D ou_stationary(const OUParams& p) {
  validate(p);
  if (!(p.a < 0.0)) {
    throw std::domain_error("no stationary density: OU drift a must be < 0");
  }
  return Gaussian1D{0.0, -p.sigma * p.sigma / (2.0 * p.a)};
}

namespace {

void push(EntropyCurve& curve, double t, const Gaussian1D& law,
          const Gaussian1D& fstar) {
  curve.time.push_back(t);
  curve.mean.push_back(law.mean);
  curve.variance.push_back(law.variance);
  curve.gibbs.push_back(gibbs_entropy(law));
  curve.conditional.push_back(conditional_entropy(law, fstar));
}

}  // namespace

EntropyCurve ou_entropy_curve(const OUParams& p, const Gaussian1D& init,
                              std::span<const double> grid) {
  validate_grid(grid);
  const Gaussian1D fstar = ou_stationary(p);
  EntropyCurve curve;
  for (double t : grid) push(curve, t, ou_propagate(p, init, t), fstar);
  return curve;
}

EntropyCurve ou_entropy_curve_point(const OUParams& p, double x0,
                                    std::span<const double> grid) {
  validate_grid(grid);
  const Gaussian1D fstar = ou_stationary(p);
  EntropyCurve curve;
  for (double t : grid) push(curve, t, ou_transition(p, x0, t), fstar);
  return curve;
}

std::string_view to_string(GibbsTrend trend) {
  switch (trend) {
    case GibbsTrend::kIncreasing: return "Increasing";
    case GibbsTrend::kConstant: return "Constant";
    case GibbsTrend::kDecreasing: return "Decreasing";
  }
  return "?";
}

GibbsTrend ou_gibbs_trend(const OUParams& p, double init_variance) {
  const double stationary = ou_stationary(p).variance;
  if (!(init_variance > 0.0)) {
    throw std::invalid_argument("ou_gibbs_trend: init_variance must be > 0");
  }
  if (std::abs(init_variance - stationary) <= 1e-12 * stationary) {
    return GibbsTrend::kConstant;
  }
  return init_variance < stationary ? GibbsTrend::kIncreasing : GibbsTrend::kDecreasing;
}

}  // namespace entroflow
