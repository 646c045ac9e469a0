#ifndef ENTROFLOW_METHOD_OF_STEPS_HPP_
#define ENTROFLOW_METHOD_OF_STEPS_HPP_

#include <functional>
#include <vector>

#include "entroflow/dde_kernel.hpp"

namespace entroflow {

// Classical RK4 for x' = a x + b x(t - tau) on a grid aligned with tau
// (h = tau / steps_per_delay). Delayed values inside a step come from the
// cubic Hermite interpolant of the step exactly one delay earlier, or from
// the history function while t - tau < 0. Fourth order overall.
//
// Shares no code with FundamentalSolution, so it serves as an independent
// reference for it.
class MethodOfSteps {
 public:
  MethodOfSteps(const DelayParams& p, std::function<double(double)> history,
                double x0, double horizon, int steps_per_delay = 2000);

  // Fundamental solution: zero history, x(0) = 1.
  static MethodOfSteps fundamental(const DelayParams& p, double horizon,
                                   int steps_per_delay = 2000);

  double operator()(double t) const;
  double step() const { return h_; }

 private:
  double delayed(std::size_t step, double c) const;
  double hermite(std::size_t step, double c) const;

  DelayParams params_;
  std::function<double(double)> history_;
  double h_;
  std::size_t lag_steps_;
  std::vector<double> y_;
  std::vector<double> d_left_;   // slope at the start of each step
  std::vector<double> d_right_;  // slope at the end of each step
};

}  // namespace entroflow

#endif  // ENTROFLOW_METHOD_OF_STEPS_HPP_
