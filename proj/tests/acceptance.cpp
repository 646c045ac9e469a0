#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "entroflow/cli.hpp"
#include "entroflow/dde_kernel.hpp"
#include "entroflow/entropy_curve.hpp"
#include "entroflow/gaussian_entropy.hpp"
#include "entroflow/method_of_steps.hpp"
#include "entroflow/ou_process.hpp"
#include "entroflow/sdde_gaussian.hpp"
#include "entroflow/verify.hpp"

using namespace entroflow;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

DelayParams draw_stable(std::mt19937_64& rng, double sigma) {
  std::uniform_real_distribution<double> ab(-2.0, 2.0), tau(0.5, 1.5);
  for (;;) {
    const DelayParams p{ab(rng), ab(rng), tau(rng), sigma};
    const HayesReport h = hayes_report(p);
    if (h.verdict == Stability::kStable &&
        std::min({h.margin_a, h.margin_sum, h.margin_third}) > 0.1) {
      return p;
    }
  }
}

Outcome ou_trichotomy() {
  const OUParams p{-1.0, std::sqrt(2.0)};
  const auto grid = uniform_grid_open(5.0, 500);
  double inc = INFINITY, flat = 0.0, dec = -INFINITY;
  for (double v0 : {0.5, 1.0, 2.0}) {
    const EntropyCurve c = ou_entropy_curve(p, Gaussian1D{0.0, v0}, grid);
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const double d = c.gibbs[i] - c.gibbs[i - 1];
      if (v0 < 1.0) inc = std::min(inc, d);
      if (v0 == 1.0) flat = std::max(flat, std::abs(d));
      if (v0 > 1.0) dec = std::max(dec, d);
    }
  }
  return {inc > 0.0 && flat < 1e-12 && dec < 0.0,
          "min dH(0.5)=" + fmt("%.3g", inc) + " max|dH(1)|=" + fmt("%.3g", flat) +
              " max dH(2)=" + fmt("%.3g", dec)};
}

Outcome ou_convergence() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ua(-3.0, -1.0), us(0.5, 2.0), um(-2.0, 2.0),
      uv(0.1, 3.0);
  const auto grid = uniform_grid_open(10.0, 1000);
  double worst_end = 0.0, worst_drop = 0.0;
  for (int i = 0; i < 100; ++i) {
    const OUParams p{ua(rng), us(rng)};
    const double vstar = p.sigma * p.sigma / (-2.0 * p.a);
    const Gaussian1D init{um(rng), uv(rng) * vstar};
    const EntropyCurve c = ou_entropy_curve(p, init, grid);
    worst_end = std::max(worst_end, std::abs(c.conditional.back()));
    for (std::size_t k = 1; k < grid.size(); ++k) {
      worst_drop = std::max(worst_drop, c.conditional[k - 1] - c.conditional[k]);
    }
  }
  return {worst_end < 1e-6 && worst_drop <= 0.0,
          "max|H_c(10)|=" + fmt("%.3g", worst_end) + " max decrease=" + fmt("%.3g", worst_drop)};
}

Outcome series_vs_steps() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ab(-3.0, 3.0), ut(0.05, 0.2);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const DelayParams p{ab(rng), ab(rng), ut(rng), 0.0};
    const double horizon = 10.0 * p.tau;
    const FundamentalSolution fs(p, horizon);
    const auto steps = MethodOfSteps::fundamental(p, horizon);
    for (int k = 0; k <= 1000; ++k) {
      const double t = horizon * k / 1000.0;
      worst = std::max(worst, std::abs(fs(t) - steps(t)));
    }
  }
  return {worst < 1e-10, "max abs error=" + fmt("%.3g", worst)};
}

Outcome kuchler_mensch() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> us(0.2, 2.0);
  double worst_rel = 0.0, worst_ibv = 0.0;
  for (int i = 0; i < 25; ++i) {
    const DelayParams p = draw_stable(rng, us(rng));
    const StationaryLaw law = stationary_law(p);
    const FundamentalSolution fs(p, 200.0 * p.tau);
    const double integral = p.sigma * p.sigma * integrate_xx(fs, 0.0, 200.0 * p.tau, 0.0);
    worst_rel = std::max(worst_rel, std::abs(law.k0 - integral) / law.k0);
    worst_ibv = std::max(worst_ibv, std::abs(2.0 * p.a * law.k0 + 2.0 * p.b * law.k_tau +
                                             p.sigma * p.sigma));
  }
  return {worst_rel < 1e-6 && worst_ibv < 1e-10,
          "max rel K0 error=" + fmt("%.3g", worst_rel) + " max ibv residual=" +
              fmt("%.3g", worst_ibv)};
}

Outcome k0_value() {
  const double k0 = stationary_law(DelayParams{0.0, -1.0, 1.0, 0.25}).k0;
  return {std::abs(k0 - 0.1065066) < 1e-6, "K0=" + fmt("%.9f", k0)};
}

Outcome fpe() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> us(0.2, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const DelayParams p = draw_stable(rng, us(rng));
    for (double m : {1.5, 2.0, 5.0}) {
      worst = std::max(worst, std::abs(fpe_residual(p, m * p.tau, 1e-4)));
    }
  }
  return {worst < 1e-6, "max residual=" + fmt("%.3g", worst)};
}

Outcome damped_oscillation() {
  const DelayParams p{0.0, -1.0, 1.1, 0.0};
  const InitialCondition phi = PointHistory{1.0};
  const FundamentalSolution fs(p, 2.2);
  double linear = 0.0;
  for (int k = 0; k <= 1100; ++k) {
    const double t = 1.1 * k / 1100.0;
    linear = std::max(linear, std::abs(solution_map(fs, phi, t) - (1.0 - t)));
  }
  const double at_tau = solution_map(fs, phi, 1.1);
  // [S_t phi(0)]^2 on (0, 1.1): falls to zero at t = 1, then rises.
  std::vector<double> sq;
  for (int k = 1; k < 110; ++k) {
    const double x = solution_map(fs, phi, 0.01 * k);
    sq.push_back(x * x);
  }
  std::size_t k = 1;
  while (k < sq.size() && sq[k] - sq[k - 1] < 0.0) ++k;
  const std::size_t turn = k;
  while (k < sq.size() && sq[k] - sq[k - 1] > 0.0) ++k;
  const bool shape = turn > 1 && turn < sq.size() && k == sq.size();
  return {linear < 1e-12 && std::abs(at_tau + 0.1) < 1e-12 && shape,
          "max|x-(1-t)|=" + fmt("%.3g", linear) + " x(1.1)=" + fmt("%.15g", at_tau) +
              " turn at t=" + fmt("%.2f", 0.01 * static_cast<double>(turn))};
}

Outcome non_monotone() {
  const DelayParams p{0.0, -1.0, 1.0, 0.25};
  const auto grid = uniform_grid_open(6.0, 2000);
  const EntropyCurve c = entropy_curve_brownian(p, 1.0, grid);
  const auto eg = strict_local_extrema(c.gibbs);
  const auto ec = strict_local_extrema(c.conditional);
  return {!eg.empty() && !ec.empty(), "extrema H_G=" + std::to_string(eg.size()) +
                                          " H_c=" + std::to_string(ec.size())};
}

Outcome marginal() {
  const DelayParams p{0.0, -1.0, std::numbers::pi / 2.0, 0.0};
  const auto grid = uniform_grid_open(20.0, 4000);
  const EntropyCurve c = entropy_curve_brownian(p, 1.0, grid);
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] > 5.0) {
      lo = std::min(lo, c.conditional[i]);
      hi = std::max(hi, c.conditional[i]);
    }
  }
  return {lo < -0.05 && hi > -0.01, "min H_c=" + fmt("%.4f", lo) + " max H_c=" + fmt("%.4f", hi)};
}

Outcome monte_carlo() {
  const VerifyReport r = run_verify_suite("mc-vs-analytic", 42);
  double worst = 0.0;
  bool pass = true;
  int used = 0;
  for (const auto& c : r.checks) {
    if (c.name.rfind("ou-", 0) == 0 || c.name.rfind("sdde-em-variance", 0) == 0) {
      pass = pass && c.passed;
      worst = std::max(worst, c.measured);
      ++used;
    }
  }
  return {pass && used == 9, std::to_string(used) + " variance checks, worst=" +
                                 fmt("%.3g", worst) + " SE"};
}

Outcome jensen() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> um(-3.0, 3.0), uv(0.2, 3.0), uw(0.1, 1.0);
  double worst = INFINITY;
  for (int i = 0; i < 20; ++i) {
    const int n = 2 + static_cast<int>(rng() % 3);
    std::vector<double> w(n);
    for (auto& x : w) x = uw(rng);
    double total = 0.0;
    for (double x : w) total += x;
    std::vector<MixtureComponent> comps;
    for (int j = 0; j < n; ++j) comps.push_back({w[j] / total, Gaussian1D{um(rng), uv(rng)}});
    const GaussianMixture mix(comps);
    const Gaussian1D fstar{um(rng), uv(rng)};
    worst = std::min(worst, mixture_conditional_entropy(mix, fstar, 1e-10) -
                                mixture_jensen_bound(mix, fstar));
  }
  std::uniform_real_distribution<double> uphi(-2.0, 2.0), ut(0.2, 4.0), us(0.2, 2.0);
  for (int i = 0; i < 20; ++i) {
    const DelayParams p = draw_stable(rng, us(rng));
    const double t = ut(rng) * p.tau;
    const double w0 = uw(rng);
    const std::vector<WeightedHistory> mu0{{w0, PointHistory{uphi(rng)}},
                                           {1.0 - w0, PointHistory{uphi(rng)}}};
    const FundamentalSolution fs(p, t);
    const double v = sdde_variance(fs, t);
    std::vector<MixtureComponent> comps;
    for (const auto& h : mu0) {
      comps.push_back({h.weight, Gaussian1D{solution_map(fs, h.history, t), v}});
    }
    const Gaussian1D fstar{0.0, stationary_law(p).k0};
    worst = std::min(worst, mixture_conditional_entropy(GaussianMixture(comps), fstar, 1e-10) -
                                entropy_lower_bound(p, mu0, t));
  }
  return {worst >= -1e-8, "min margin=" + fmt("%.3g", worst)};
}

std::string verify_text(const char* threads) {
  const char* argv[] = {"entroflow", "verify", "mc-vs-analytic", "--seed", "42", "--threads",
                        threads};
  std::ostringstream out, err;
  run_cli(7, argv, out, err);
  return out.str();
}

Outcome determinism() {
  const std::string one = verify_text("1");
  const std::string eight = verify_text("8");
  return {!one.empty() && one == eight,
          std::to_string(one.size()) + " vs " + std::to_string(eight.size()) + " bytes"};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{
      ou_trichotomy, ou_convergence, series_vs_steps, kuchler_mensch, k0_value,    fpe,
      damped_oscillation, non_monotone, marginal, monte_carlo, jensen, determinism};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu: %s %s (%.2f s)\n", i + 1, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
