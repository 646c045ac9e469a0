#ifndef ENTROFLOW_MC_SIM_HPP_
#define ENTROFLOW_MC_SIM_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "entroflow/dde_kernel.hpp"
#include "entroflow/gaussian_entropy.hpp"
#include "entroflow/ou_process.hpp"

namespace entroflow {

using ModelParams = std::variant<OUParams, DelayParams>;

// A history on [-tau, 0] for the delay model, or for the OU model either a
// PointHistory (x(0) = c) or a Gaussian law of x(0).
using SimInit = std::variant<InitialCondition, Gaussian1D>;

struct SimConfig {
  ModelParams params;
  SimInit init;
  double dt = 1e-3;
  double t_max = 1.0;
  std::size_t n_traj = 1000;
  std::uint64_t master_seed = 0;
  // Times at which the ensemble is summarised; each must be a multiple of dt.
  // Empty means {t_max}.
  std::vector<double> output_times;
  // Equal-width histogram per output time when > 0.
  std::size_t histogram_bins = 0;
  // Keep every trajectory's value at each output time.
  bool keep_samples = false;
};

// Throws std::invalid_argument on a malformed config, including tau/dt not an
// integer and n_traj < 2.
void validate(const SimConfig& cfg);

// Output step indices round(t / dt), validated against the grid.
std::vector<std::size_t> output_steps(const SimConfig& cfg);

// Steps per delay, tau / dt; throws unless it is an integer within 1e-9.
std::size_t delay_steps(double tau, double dt);

struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
};

struct EnsembleSummary {
  std::size_t n_traj = 0;
  std::vector<double> time;
  std::vector<double> mean;
  std::vector<double> variance;     // unbiased
  std::vector<double> mean_se;
  std::vector<double> variance_se;  // sqrt((m4 - m2^2) / n)
  std::vector<Histogram> histograms;
  std::vector<std::vector<double>> samples;
};

// Raised when a trajectory exceeds kBlowUpThreshold in magnitude.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kBlowUpThreshold = 1e100;

// Exact OU transition sampling: x_{k+1} = e^{a dt} x_k + N(0, upsilon(dt)).
EnsembleSummary simulate_ou_exact(const SimConfig& cfg, int threads = 0);

// Euler-Maruyama with a delay ring buffer of tau/dt steps:
// x_{k+1} = x_k + (a x_k + b x_{k-N}) dt + sigma sqrt(dt) xi_k.
// A Brownian history draws its own increments from the trajectory's stream
// before the first step.
EnsembleSummary simulate_sdde_em(const SimConfig& cfg, int threads = 0);

// Straightforward single-threaded versions kept as the reference for the
// OpenMP kernels; they consume each trajectory's stream identically, so the
// results must match bit for bit.
namespace reference {
EnsembleSummary simulate_ou_exact(const SimConfig& cfg);
EnsembleSummary simulate_sdde_em(const SimConfig& cfg);
}  // namespace reference

// Variance of the Euler-Maruyama iterate at time t for a non-random history,
// sigma^2 dt sum_j g_j^2 over the discrete fundamental solution g. No sampling
// error; isolates the scheme's bias.
double em_variance_exact(const DelayParams& p, double dt, double t);

struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;
  double mean_se = 0.0;
  double variance_se = 0.0;
};

// Two-pass moments with Kahan summation in index order.
SampleMoments sample_moments(std::span<const double> samples);

// 1/2 + 1/2 ln(2 pi s^2) with the unbiased sample variance.
double estimate_entropy_gaussian_plugin(std::span<const double> samples);

// -sum p_i ln(p_i / width) over equal-width bins spanning the sample range.
double estimate_entropy_histogram(std::span<const double> samples, std::size_t n_bins);

// Closed-form H_c of the fitted Gaussian (mean, unbiased variance) against fstar.
double estimate_conditional_entropy(std::span<const double> samples,
                                    const Gaussian1D& fstar);

}  // namespace entroflow

#endif  // ENTROFLOW_MC_SIM_HPP_
