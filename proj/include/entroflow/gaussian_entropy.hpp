#ifndef ENTROFLOW_GAUSSIAN_ENTROPY_HPP_
#define ENTROFLOW_GAUSSIAN_ENTROPY_HPP_

#include <span>
#include <vector>

namespace entroflow {

// Scalar Gaussian density f_{m, s^2}. Entropies are in nats.
struct Gaussian1D {
  double mean = 0.0;
  double variance = 1.0;
};

// Smallest accepted variance; anything below is rejected, never clamped.
inline constexpr double kMinVariance = 1e-300;

// Throws std::domain_error unless the variance is finite and >= kMinVariance
// and the mean is finite.
void validate(const Gaussian1D& g);

double log_density(const Gaussian1D& g, double x);
double density(const Gaussian1D& g, double x);

// H_G(f) = -int f ln f = 1/2 + 1/2 ln(2 pi var).
double gibbs_entropy(const Gaussian1D& g);

// H_c(f | g) = -int f ln(f / g). Non-positive, zero iff f == g.
double conditional_entropy(const Gaussian1D& f, const Gaussian1D& g);

// int f ln fstar in closed form.
double cross_log_integral(const Gaussian1D& f, const Gaussian1D& fstar);

// H_G(f) - [H_c(f | fstar) - int f ln fstar]; zero up to rounding.
double entropy_bridge_residual(const Gaussian1D& f, const Gaussian1D& fstar);

// Non-equilibrium entropy H_c(f | fstar) + H_G(fstar).
double h_ne(const Gaussian1D& f, const Gaussian1D& fstar);

struct MixtureComponent {
  double weight = 1.0;
  Gaussian1D component;
};

// Finite Gaussian mixture. Weights must be positive and sum to one within
// 1e-12.
class GaussianMixture {
 public:
  explicit GaussianMixture(std::vector<MixtureComponent> components);

  const std::vector<MixtureComponent>& components() const { return components_; }
  double log_density(double x) const;
  double mean() const;
  double variance() const;

 private:
  std::vector<MixtureComponent> components_;
};

// -int f ln(f / fstar) for the mixture density f, integrated adaptively over
// mean +/- 10 combined standard deviations. Throws quad::QuadratureError when
// the requested tolerance is not reached.
double mixture_conditional_entropy(const GaussianMixture& mix,
                                   const Gaussian1D& fstar, double quad_tol);

// sum_i w_i H_c(g_i | fstar): the Jensen lower bound for the mixture.
double mixture_jensen_bound(const GaussianMixture& mix, const Gaussian1D& fstar);

}  // namespace entroflow

#endif  // ENTROFLOW_GAUSSIAN_ENTROPY_HPP_
