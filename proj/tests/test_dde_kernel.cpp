#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "entroflow/dde_kernel.hpp"
#include "entroflow/method_of_steps.hpp"

using namespace entroflow;

namespace {

constexpr double kPi = std::numbers::pi;

TEST(FundamentalSolution, Examples) {
  const DelayParams p{0.0, -1.0, 1.0};
  const FundamentalSolution fs(p, 5.0);
  EXPECT_EQ(fs(0.0), 1.0);
  EXPECT_EQ(fs(-0.5), 0.0);
  EXPECT_NEAR(fs(0.5), 1.0, 1e-15);
  EXPECT_NEAR(fs(1.5), 0.5, 1e-15);
  EXPECT_NEAR(fs(2.5), 1.0 - 1.5 + 0.5 * 0.25, 1e-15);
  EXPECT_THROW(fs(5.5), std::out_of_range);
}

TEST(FundamentalSolution, HorizonGuard) {
  EXPECT_THROW(FundamentalSolution({0.0, -1.0, 1e-3}, 1001.0), std::invalid_argument);
  EXPECT_THROW(FundamentalSolution({0.0, -1.0, 1.0}, 0.0), std::invalid_argument);
  EXPECT_NO_THROW(FundamentalSolution({0.0, -1.0, 1.0}, 1e3));
}

TEST(FundamentalSolution, ParamValidation) {
  EXPECT_THROW(validate(DelayParams{0.0, -1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(validate(DelayParams{0.0, -1.0, 1.0, -1.0}), std::invalid_argument);
}

TEST(FundamentalSolution, IntervalIndexGuard) {
  const FundamentalSolution fs({0.0, -1.0, 0.1}, 2.0);
  EXPECT_EQ(fs.interval_index(0.3), 3u);
  EXPECT_EQ(fs.interval_index(3 * 0.1), 3u);
  EXPECT_EQ(fs.interval_index(0.7), 7u);
  EXPECT_EQ(fs.interval_index(0.25), 2u);
}

TEST(FundamentalSolution, MatchesDirectSeries) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> coef(-1.0, 1.0), delay(0.3, 1.0);
  for (int k = 0; k < 20; ++k) {
    const DelayParams p{coef(rng), coef(rng), delay(rng)};
    const double horizon = 4.0 * p.tau;
    const FundamentalSolution fs(p, horizon);
    for (int i = 0; i <= 400; ++i) {
      const double t = horizon * i / 400.0;
      const double direct = fundamental_series_direct(p, t);
      EXPECT_NEAR(fs(t), direct, 1e-13 * std::max(1.0, std::abs(direct))) << t;
    }
  }
}

TEST(FundamentalSolution, AgreesWithMethodOfStepsAbsolute) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> coef(-3.0, 3.0), delay(0.05, 0.2);
  for (int k = 0; k < 10; ++k) {
    const DelayParams p{coef(rng), coef(rng), delay(rng)};
    const double horizon = 10.0 * p.tau;
    const FundamentalSolution fs(p, horizon);
    const auto ref = MethodOfSteps::fundamental(p, horizon);
    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double t = horizon * i / 2000.0;
      worst = std::max(worst, std::abs(fs(t) - ref(t)));
    }
    EXPECT_LT(worst, 1e-10) << p.a << " " << p.b << " " << p.tau;
  }
}

TEST(FundamentalSolution, AgreesWithMethodOfStepsRelative) {
  // Unit delay: X can grow to ~e^{30}; compare against the running maximum.
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (int k = 0; k < 10; ++k) {
    const DelayParams p{coef(rng), coef(rng), 1.0};
    const FundamentalSolution fs(p, 10.0);
    const auto ref = MethodOfSteps::fundamental(p, 10.0);
    double scale = 1.0;
    for (int i = 0; i <= 1000; ++i) {
      const double t = 0.01 * i;
      scale = std::max(scale, std::abs(ref(t)));
      EXPECT_NEAR(fs(t), ref(t), 1e-9 * scale) << p.a << " " << p.b << " t=" << t;
    }
  }
}

TEST(FundamentalSolution, StaysAccurateFarOut) {
  // Raw series terms reach e^{|b| t} ~ 1e21 at t = 50; the stable solution is
  // tiny there. The regrouped tables still follow the ODE.
  const DelayParams p{-0.5, -1.0, 1.0};
  const FundamentalSolution fs(p, 50.0);
  const auto ref = MethodOfSteps::fundamental(p, 50.0);
  for (double t : {20.0, 35.5, 49.9}) {
    EXPECT_NEAR(fs(t), ref(t), 1e-10);
  }
  EXPECT_LT(std::abs(fs(49.9)), 1e-3);
}

TEST(FundamentalSolution, SatisfiesDelayEquation) {
  const DelayParams p{0.7, -1.9, 0.8};
  const FundamentalSolution fs(p, 8.0);
  const double h = 1e-5;
  for (int i = 0; i < 200; ++i) {
    const double t = 0.013 + 0.039 * i;
    if (std::abs(std::remainder(t, p.tau)) < 2 * h) continue;
    const double fd = (fs(t + h) - fs(t - h)) / (2.0 * h);
    EXPECT_NEAR(fd, p.a * fs(t) + p.b * fs(t - p.tau), 1e-6) << t;
    EXPECT_NEAR(fs.derivative(t), p.a * fs(t) + p.b * fs(t - p.tau), 1e-12);
  }
}

TEST(FundamentalSolution, ContinuousAtInterfaces) {
  const DelayParams p{-0.3, 2.1, 0.6};
  const FundamentalSolution fs(p, 6.0);
  for (int k = 1; k < 10; ++k) {
    const double t = k * p.tau;
    EXPECT_NEAR(fs(std::nextafter(t, 0.0)), fs(t), 1e-12 * std::max(1.0, std::abs(fs(t))));
  }
}

double window_max(const FundamentalSolution& fs, double lo, double hi) {
  double m = 0.0;
  for (int i = 0; i <= 500; ++i) m = std::max(m, std::abs(fs(lo + (hi - lo) * i / 500.0)));
  return m;
}

TEST(Hayes, DecayCheckAgreesWithVerdict) {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> coef(-2.0, 2.0), delay(0.2, 1.0);
  int stable = 0, unstable = 0;
  for (int k = 0; k < 200; ++k) {
    const DelayParams p{coef(rng), coef(rng), delay(rng)};
    const HayesReport r = hayes_report(p);
    const double closest = std::min({std::abs(r.margin_a), std::abs(r.margin_sum),
                                     std::abs(r.margin_third)});
    if (closest < 0.1) continue;
    const FundamentalSolution fs(p, 50.0 * p.tau);
    const double early = window_max(fs, 10.0 * p.tau, 20.0 * p.tau);
    const double late = window_max(fs, 40.0 * p.tau, 50.0 * p.tau);
    if (r.verdict == Stability::kStable) {
      ++stable;
      EXPECT_LT(late, early) << p.a << " " << p.b << " " << p.tau;
      EXPECT_LT(late, 0.5 * window_max(fs, 0.0, 2.0 * p.tau));
    } else {
      ++unstable;
      EXPECT_GT(late, early) << p.a << " " << p.b << " " << p.tau;
    }
  }
  EXPECT_GT(stable, 10);
  EXPECT_GT(unstable, 10);
}

TEST(Hayes, Examples) {
  EXPECT_EQ(hayes_stable({0.0, -1.0, 1.0}), Stability::kStable);
  EXPECT_EQ(hayes_stable({0.0, -1.0, kPi / 2.0}), Stability::kMarginal);
  EXPECT_EQ(hayes_stable({2.0, 0.0, 1.0}), Stability::kUnstable);
  EXPECT_EQ(hayes_stable({2.0, -5.0, 1.0}), Stability::kUnstable);
  EXPECT_EQ(hayes_stable({0.0, -1.0, 1.6}), Stability::kUnstable);
  EXPECT_EQ(hayes_stable({-1.0, 0.0, 1.0}), Stability::kStable);
  EXPECT_EQ(hayes_stable({-1.0, 1.0, 1.0}), Stability::kMarginal);
  EXPECT_EQ(to_string(Stability::kMarginal), "Marginal");
}

TEST(Hayes, KappaSolvesTanEquation) {
  EXPECT_EQ(hayes_kappa(0.0), kPi / 2.0);
  for (double at : {-5.0, -1.0, -0.1, 0.1, 0.5, 0.99}) {
    const double k = hayes_kappa(at);
    EXPECT_GT(k, 0.0);
    EXPECT_LT(k, kPi);
    EXPECT_NEAR(k * std::cos(k) - at * std::sin(k), 0.0, 1e-13);
  }
}

TEST(Hayes, BandAroundBoundary) {
  EXPECT_EQ(hayes_stable({0.0, -1.0, kPi / 2.0 - 1e-10}), Stability::kMarginal);
  EXPECT_EQ(hayes_stable({0.0, -1.0, kPi / 2.0 - 1e-7}), Stability::kStable);
  EXPECT_EQ(hayes_stable({0.0, -1.0, kPi / 2.0 + 1e-7}), Stability::kUnstable);
}

TEST(SolutionMap, DampedOscillationExample) {
  const DelayParams p{0.0, -1.0, 1.1};
  const InitialCondition phi = PointHistory{1.0};
  const FundamentalSolution fs(p, 2.2);
  for (int i = 0; i <= 110; ++i) {
    const double t = 0.01 * i;
    EXPECT_NEAR(solution_map(fs, phi, t), 1.0 - t, 1e-12);
  }
  EXPECT_NEAR(solution_map(fs, phi, 1.1), -0.1, 1e-12);
  EXPECT_EQ(solution_map(fs, phi, 0.0), 1.0);
  // -0.1 - int_{1.1}^{2.2} (1 - (u - 1.1)) du
  EXPECT_NEAR(solution_map(fs, phi, 2.2), -0.595, 1e-12);
  const MethodOfSteps ref(p, [](double) { return 1.0; }, 1.0, 2.2);
  EXPECT_NEAR(ref(2.2), -0.595, 1e-12);
}

TEST(SolutionMap, TabulatedMatchesMethodOfSteps) {
  const DelayParams p{-0.4, -1.3, 0.8};
  const std::vector<double> knots{-0.8, -0.6, -0.4, -0.2, 0.0};
  const std::vector<double> values{0.3, -0.5, 1.2, 0.1, 0.9};
  const TabulatedHistory tab(knots, values);
  const InitialCondition phi = tab;
  const FundamentalSolution fs(p, 6.0);
  const MethodOfSteps ref(p, [&](double s) { return tab(s); }, 0.9, 6.0);
  for (int i = 0; i <= 60; ++i) {
    const double t = 0.1 * i;
    EXPECT_NEAR(solution_map(fs, phi, t), ref(t), 1e-10) << t;
  }
}

TEST(SolutionMap, LinearInHistory) {
  const DelayParams p{0.3, -1.7, 1.3};
  const FundamentalSolution fs(p, 7.0);
  const std::vector<double> knots{-1.3, -0.9, -0.2, 0.0};
  const TabulatedHistory f(knots, {1.0, -2.0, 0.5, 0.25});
  const TabulatedHistory g(knots, {0.0, 3.0, -1.0, 2.0});
  const double alpha = 0.7, beta = -1.9;
  const TabulatedHistory combo(knots, {alpha * 1.0 + beta * 0.0, alpha * -2.0 + beta * 3.0,
                                       alpha * 0.5 + beta * -1.0, alpha * 0.25 + beta * 2.0});
  for (double t : {0.0, 0.5, 1.3, 2.0, 4.4, 7.0}) {
    const double lhs = solution_map(fs, combo, t);
    const double rhs = alpha * solution_map(fs, f, t) + beta * solution_map(fs, g, t);
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(SolutionMap, SegmentView) {
  const DelayParams p{0.0, -1.0, 1.1};
  const FundamentalSolution fs(p, 3.0);
  const InitialCondition phi = PointHistory{1.0};
  EXPECT_EQ(solution_map_at(fs, phi, 0.5, -0.8), 1.0);
  EXPECT_NEAR(solution_map_at(fs, phi, 2.0, -0.5), solution_map(fs, phi, 1.5), 1e-15);
}

TEST(SolutionMap, RejectsRandomOrBadHistory) {
  const FundamentalSolution fs({0.0, -1.0, 1.0}, 2.0);
  EXPECT_THROW(solution_map(fs, BrownianHistory{1.0}, 1.0), std::domain_error);
  const TabulatedHistory short_tab({-0.5, 0.0}, {1.0, 1.0});
  EXPECT_THROW(solution_map(fs, short_tab, 1.0), std::invalid_argument);
  EXPECT_THROW(TabulatedHistory({0.0, -1.0}, {1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(solution_map(fs, PointHistory{1.0}, -0.1), std::invalid_argument);
}

TEST(IntegrateXX, Examples) {
  const FundamentalSolution fs({0.0, -1.0, 1.0}, 4.0);
  EXPECT_NEAR(integrate_xx(fs, 0.0, 1.0, 0.0), 1.0, 1e-15);
  EXPECT_EQ(integrate_xx(fs, 0.7, 0.7, 0.0), 0.0);
  EXPECT_NEAR(integrate_xx(fs, 0.0, 1.0, 1.0), 0.5, 1e-15);
  // int_1^2 (2 - q)^2 dq = 1/3
  EXPECT_NEAR(integrate_xx(fs, 1.0, 2.0, 0.0), 1.0 / 3.0, 1e-15);
  EXPECT_THROW(integrate_xx(fs, 0.0, 3.5, 1.0), std::out_of_range);
  EXPECT_THROW(integrate_xx(fs, 0.0, 1.0, -0.1), std::out_of_range);
}

TEST(IntegrateXX, MatchesFineQuadratureOfSteps) {
  const DelayParams p{-0.6, 1.4, 0.7};
  const FundamentalSolution fs(p, 5.0);
  const auto ref = MethodOfSteps::fundamental(p, 5.0);
  const double lag = 0.45;
  const int n = 40000;
  const double hi = 4.0;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double q = hi * (i + 0.5) / n;
    sum += ref(q) * ref(q + lag);
  }
  sum *= hi / n;
  EXPECT_NEAR(integrate_xx(fs, 0.0, hi, lag), sum, 1e-7 * std::abs(sum));
}

TEST(IntegrateXX, NonNegativeAndMonotone) {
  const FundamentalSolution fs({0.2, -2.5, 1.0}, 10.0);
  double prev = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double v = integrate_xx(fs, 0.0, 0.1 * i, 0.0);
    EXPECT_GE(v, prev);
    prev = v;
  }
  EXPECT_NEAR(integrate_x(fs, 0.0, 1.0), 1.0 * (std::exp(0.2) - 1.0) / 0.2, 1e-14);
}

}  // namespace
