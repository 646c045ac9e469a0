#include "entroflow/method_of_steps.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace entroflow {

MethodOfSteps::MethodOfSteps(const DelayParams& p, std::function<double(double)> history,
                             double x0, double horizon, int steps_per_delay)
    : params_(p), history_(std::move(history)) {
  validate(p);
  if (steps_per_delay < 1 || !(horizon > 0.0)) {
    throw std::invalid_argument("MethodOfSteps: bad horizon or step count");
  }
  h_ = p.tau / steps_per_delay;
  lag_steps_ = static_cast<std::size_t>(steps_per_delay);
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / h_ - 1e-9));
  y_.reserve(steps + 1);
  d_left_.reserve(steps);
  d_right_.reserve(steps);
  y_.push_back(x0);

  const double a = p.a;
  const double b = p.b;
  for (std::size_t k = 0; k < steps; ++k) {
    const double y = y_[k];
    const double z0 = delayed(k, 0.0);
    const double zh = delayed(k, 0.5);
    const double z1 = delayed(k, 1.0);
    const double k1 = a * y + b * z0;
    const double k2 = a * (y + 0.5 * h_ * k1) + b * zh;
    const double k3 = a * (y + 0.5 * h_ * k2) + b * zh;
    const double k4 = a * (y + h_ * k3) + b * z1;
    const double next = y + h_ / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    y_.push_back(next);
    d_left_.push_back(k1);
    d_right_.push_back(a * next + b * z1);
  }
}

MethodOfSteps MethodOfSteps::fundamental(const DelayParams& p, double horizon,
                                         int steps_per_delay) {
  return MethodOfSteps(p, [](double) { return 0.0; }, 1.0, horizon, steps_per_delay);
}

double MethodOfSteps::hermite(std::size_t step, double c) const {
  const double c2 = c * c;
  const double c3 = c2 * c;
  return (2.0 * c3 - 3.0 * c2 + 1.0) * y_[step] + (c3 - 2.0 * c2 + c) * h_ * d_left_[step] +
         (-2.0 * c3 + 3.0 * c2) * y_[step + 1] + (c3 - c2) * h_ * d_right_[step];
}

double MethodOfSteps::delayed(std::size_t step, double c) const {
  if (step < lag_steps_) {
    // Still inside the initial history; evaluate it directly, keeping the
    // endpoint t - tau = 0 on the history side.
    const double s = (static_cast<double>(step) + c) * h_ - params_.tau;
    return history_(std::min(s, 0.0));
  }
  return hermite(step - lag_steps_, c);
}

double MethodOfSteps::operator()(double t) const {
  if (t < 0.0) return history_(t);
  const double q = t / h_;
  auto step = static_cast<std::size_t>(std::floor(q));
  if (step >= d_left_.size()) {
    if (step == d_left_.size() && q - static_cast<double>(step) < 1e-9) return y_.back();
    throw std::out_of_range("MethodOfSteps: t beyond horizon");
  }
  return hermite(step, q - static_cast<double>(step));
}

}  // namespace entroflow
