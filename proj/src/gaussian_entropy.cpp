#include "entroflow/gaussian_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "entroflow/quadrature.hpp"

namespace entroflow {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;  // ln(2 pi)

}  // namespace

void validate(const Gaussian1D& g) {
  if (!std::isfinite(g.mean)) {
    throw std::domain_error("Gaussian1D: mean is not finite");
  }
  if (!std::isfinite(g.variance) || !(g.variance >= kMinVariance)) {
    std::ostringstream msg;
    msg << "Gaussian1D: variance must be >= " << kMinVariance << ", got "
        << g.variance;
    throw std::domain_error(msg.str());
  }
}

double log_density(const Gaussian1D& g, double x) {
  const double d = x - g.mean;
  return -0.5 * (kLog2Pi + std::log(g.variance)) - d * d / (2.0 * g.variance);
}

double density(const Gaussian1D& g, double x) { return std::exp(log_density(g, x)); }

double gibbs_entropy(const Gaussian1D& g) {
  validate(g);
  return 0.5 + 0.5 * (kLog2Pi + std::log(g.variance));
}

double conditional_entropy(const Gaussian1D& f, const Gaussian1D& g) {
  validate(f);
  validate(g);
  const double ratio = f.variance / g.variance;
  const double dm = f.mean - g.mean;
  return 0.5 * std::log(ratio) + 0.5 * (1.0 - ratio) - dm * dm / (2.0 * g.variance);
}

double cross_log_integral(const Gaussian1D& f, const Gaussian1D& fstar) {
  validate(f);
  validate(fstar);
  const double dm = f.mean - fstar.mean;
  return -0.5 * (kLog2Pi + std::log(fstar.variance)) -
         (f.variance + dm * dm) / (2.0 * fstar.variance);
}

double entropy_bridge_residual(const Gaussian1D& f, const Gaussian1D& fstar) {
  return gibbs_entropy(f) -
         (conditional_entropy(f, fstar) - cross_log_integral(f, fstar));
}

double h_ne(const Gaussian1D& f, const Gaussian1D& fstar) {
  return conditional_entropy(f, fstar) + gibbs_entropy(fstar);
}

GaussianMixture::GaussianMixture(std::vector<MixtureComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw std::invalid_argument("GaussianMixture: no components");
  }
  double total = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight > 0.0) || !std::isfinite(c.weight)) {
      throw std::invalid_argument("GaussianMixture: weights must be positive");
    }
    validate(c.component);
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("GaussianMixture: weights must sum to 1");
  }
}

double GaussianMixture::log_density(double x) const {
  // log-sum-exp keeps the far tails finite.
  double peak = -std::numeric_limits<double>::infinity();
  for (const auto& c : components_) {
    peak = std::max(peak, std::log(c.weight) + entroflow::log_density(c.component, x));
  }
  double sum = 0.0;
  for (const auto& c : components_) {
    sum += std::exp(std::log(c.weight) + entroflow::log_density(c.component, x) - peak);
  }
  return peak + std::log(sum);
}

double GaussianMixture::mean() const {
  double m = 0.0;
  for (const auto& c : components_) m += c.weight * c.component.mean;
  return m;
}

double GaussianMixture::variance() const {
  const double m = mean();
  double v = 0.0;
  for (const auto& c : components_) {
    const double d = c.component.mean - m;
    v += c.weight * (c.component.variance + d * d);
  }
  return v;
}

double mixture_conditional_entropy(const GaussianMixture& mix,
                                   const Gaussian1D& fstar, double quad_tol) {
  validate(fstar);
  if (!(quad_tol > 0.0)) {
    throw std::invalid_argument("mixture_conditional_entropy: quad_tol must be > 0");
  }
  const double centre = mix.mean();
  const double half_width = 10.0 * std::sqrt(mix.variance());
  auto integrand = [&](double x) {
    const double log_f = mix.log_density(x);
    return -std::exp(log_f) * (log_f - log_density(fstar, x));
  };
  const auto result = quad::adaptive_gauss_legendre(
      integrand, centre - half_width, centre + half_width, quad_tol);
  if (!result.converged || result.error_estimate > quad_tol) {
    std::ostringstream msg;
    msg << "mixture_conditional_entropy: quadrature did not converge (achieved "
        << result.error_estimate << ", requested " << quad_tol << ")";
    throw quad::QuadratureError(msg.str(), result.error_estimate);
  }
  return result.value;
}

double mixture_jensen_bound(const GaussianMixture& mix, const Gaussian1D& fstar) {
  double bound = 0.0;
  for (const auto& c : mix.components()) {
    bound += c.weight * conditional_entropy(c.component, fstar);
  }
  return bound;
}

}  // namespace entroflow
