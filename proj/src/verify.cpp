#include "entroflow/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "entroflow/dde_kernel.hpp"
#include "entroflow/format.hpp"
#include "entroflow/gaussian_entropy.hpp"
#include "entroflow/mc_sim.hpp"
#include "entroflow/method_of_steps.hpp"
#include "entroflow/ou_process.hpp"
#include "entroflow/sdde_gaussian.hpp"

namespace entroflow {

namespace {

constexpr std::array<std::string_view, 3> kSuites = {"identities", "mc-vs-analytic",
                                                     "fpe-residual"};

void add(VerifyReport& report, std::string name, double measured, double threshold) {
  report.checks.push_back({std::move(name), measured < threshold, measured, threshold});
}

std::string label(const DelayParams& p) {
  std::ostringstream os;
  os << "a=" << format_double(p.a) << ",b=" << format_double(p.b)
     << ",tau=" << format_double(p.tau);
  return os.str();
}

// Stable (a, b, tau) with every Hayes margin at least 0.1, so X decays fast
// enough for long-horizon checks.
DelayParams draw_stable(std::mt19937_64& rng, double sigma) {
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_real_distribution<double> delay(0.5, 1.5);
  for (;;) {
    DelayParams p{coef(rng), coef(rng), delay(rng), sigma};
    const HayesReport r = hayes_report(p);
    if (r.verdict == Stability::kStable && r.margin_a > 0.1 && r.margin_sum > 0.1 &&
        r.margin_third > 0.1) {
      return p;
    }
  }
}

void identities(VerifyReport& report, std::mt19937_64& rng) {
  // Stationary variance: closed form against the long-horizon integral, and
  // the moment identity 2 a K0 + 2 b K(tau) + sigma^2 = 0.
  std::vector<DelayParams> params{{0.0, -1.0, 1.0, 0.25}};
  for (int i = 0; i < 4; ++i) params.push_back(draw_stable(rng, 1.0));
  for (const auto& p : params) {
    const StationaryLaw law = stationary_law(p);
    add(report, "ibv-residual[" + label(p) + "]",
        std::abs(2.0 * p.a * law.k0 + 2.0 * p.b * law.k_tau + p.sigma * p.sigma), 1e-10);
    const double horizon = 200.0 * p.tau;
    const double integral = sdde_variance(FundamentalSolution(p, horizon), horizon);
    add(report, "k0-vs-integral[" + label(p) + "]", std::abs(law.k0 - integral) / law.k0,
        1e-6);
  }

  // H_G(f) = H_c(f|f*) - int f ln f* on random Gaussian pairs.
  std::uniform_real_distribution<double> mean(-3.0, 3.0);
  std::uniform_real_distribution<double> var(0.1, 4.0);
  double worst_bridge = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Gaussian1D f{mean(rng), var(rng)};
    const Gaussian1D g{mean(rng), var(rng)};
    worst_bridge = std::max(worst_bridge, std::abs(entropy_bridge_residual(f, g)));
  }
  add(report, "bridge-residual[50 pairs]", worst_bridge, 1e-12);

  // Fundamental solution tables against RK4 method of steps on [0, 10 tau].
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  std::uniform_real_distribution<double> delay(0.05, 0.2);
  for (int i = 0; i < 5; ++i) {
    const DelayParams p{coef(rng), coef(rng), delay(rng), 0.0};
    const double horizon = 10.0 * p.tau;
    const FundamentalSolution fs(p, horizon);
    const auto steps = MethodOfSteps::fundamental(p, horizon);
    double worst = 0.0;
    for (int k = 0; k <= 1000; ++k) {
      const double t = horizon * k / 1000.0;
      worst = std::max(worst, std::abs(fs(t) - steps(t)));
    }
    add(report, "series-vs-steps[" + label(p) + "]", worst, 1e-10);
  }
}

void fpe(VerifyReport& report, std::mt19937_64& rng) {
  std::vector<DelayParams> params{{0.0, -1.0, 1.0, 1.0}};
  for (int i = 0; i < 3; ++i) params.push_back(draw_stable(rng, 1.0));
  const InitialCondition phi = PointHistory{1.0};
  for (const auto& p : params) {
    for (double mult : {1.5, 2.0, 5.0}) {
      for (double h : {1e-3, 1e-4}) {
        const double t = mult * p.tau;
        std::ostringstream name;
        name << "fpe-variance[" << label(p) << ",t=" << format_double(t)
             << ",h=" << format_double(h) << "]";
        add(report, name.str(), std::abs(fpe_residual(p, t, h)), h == 1e-4 ? 1e-6 : 1e-4);
      }
      const double t = mult * p.tau;
      std::ostringstream name;
      name << "fpe-mean[" << label(p) << ",t=" << format_double(t) << ",h=0.0001]";
      add(report, name.str(), std::abs(fpe_mean_residual(p, phi, t, 1e-4)), 1e-6);
    }
  }
}

void mc(VerifyReport& report, std::uint64_t seed, int threads) {
  const std::size_t n = 100000;

  // Exact OU sampler from a point start.
  {
    const OUParams p{-1.0, std::sqrt(2.0)};
    SimConfig cfg{p, InitialCondition{PointHistory{0.0}}, 1e-3, 2.0, n, seed, {0.5, 1.0, 2.0}};
    const EnsembleSummary s = simulate_ou_exact(cfg, threads);
    for (std::size_t k = 0; k < s.time.size(); ++k) {
      const double z = std::abs(s.variance[k] - ou_variance(p, s.time[k])) / s.variance_se[k];
      add(report, "ou-exact-variance[t=" + format_double(s.time[k]) + "] (SE)", z, 5.0);
    }
  }
  // Stationary start keeps the variance at sigma^2 / (2|a|) = 1.
  {
    const OUParams p{-1.0, std::sqrt(2.0)};
    SimConfig cfg{p, Gaussian1D{0.0, 1.0}, 1e-3, 4.0, n, seed + 1, {1.0, 2.0, 4.0}};
    const EnsembleSummary s = simulate_ou_exact(cfg, threads);
    for (std::size_t k = 0; k < s.time.size(); ++k) {
      const double z = std::abs(s.variance[k] - 1.0) / s.variance_se[k];
      add(report, "ou-stationary-variance[t=" + format_double(s.time[k]) + "] (SE)", z, 5.0);
    }
  }
  // Euler-Maruyama SDDE with Brownian history against the closed form.
  {
    const DelayParams p{0.0, -1.0, 1.0, 0.25};
    SimConfig cfg{p, InitialCondition{BrownianHistory{1.0}}, 1e-3, 4.0, n, seed + 2,
                  {1.0, 2.0, 4.0}};
    const EnsembleSummary s = simulate_sdde_em(cfg, threads);
    const FundamentalSolution fs(p, 5.0);
    for (std::size_t k = 0; k < s.time.size(); ++k) {
      const double exact = brownian_history_variance(fs, 1.0, s.time[k]);
      const double z = std::abs(s.variance[k] - exact) / s.variance_se[k];
      add(report, "sdde-em-variance[t=" + format_double(s.time[k]) + "] (SE)", z, 5.0);
    }
  }
  // Ensemble mean from phi = 1 against the solution map.
  {
    const DelayParams p{0.0, -1.0, 1.1, 0.25};
    const InitialCondition phi = PointHistory{1.0};
    SimConfig cfg{p, phi, 1e-3, 2.2, 20000, seed + 3, {0.55, 1.1, 2.2}};
    const EnsembleSummary s = simulate_sdde_em(cfg, threads);
    const FundamentalSolution fs(p, 2.2);
    for (std::size_t k = 0; k < s.time.size(); ++k) {
      const double err = std::abs(s.mean[k] - solution_map(fs, phi, s.time[k]));
      add(report, "sdde-em-mean[t=" + format_double(s.time[k]) + "]", err,
          5.0 * s.mean_se[k] + cfg.dt);
    }
  }
}

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

std::string VerifyReport::to_text() const {
  std::ostringstream os;
  os << "suite " << suite << " seed " << seed << "\n";
  std::size_t passed = 0;
  for (const auto& c : checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << " measured=" << format_double(c.measured)
       << " threshold=" << format_double(c.threshold) << "\n";
    passed += c.passed ? 1 : 0;
  }
  os << passed << "/" << checks.size() << " checks passed\n";
  return os.str();
}

std::span<const std::string_view> verify_suite_names() { return kSuites; }

VerifyReport run_verify_suite(std::string_view suite, std::uint64_t seed, int threads) {
  VerifyReport report;
  report.suite = std::string(suite);
  report.seed = seed;
  std::mt19937_64 rng(seed);
  if (suite == "identities") {
    identities(report, rng);
  } else if (suite == "mc-vs-analytic") {
    mc(report, seed, threads);
  } else if (suite == "fpe-residual") {
    fpe(report, rng);
  } else {
    throw std::invalid_argument("unknown verify suite '" + std::string(suite) + "'");
  }
  return report;
}

}  // namespace entroflow
