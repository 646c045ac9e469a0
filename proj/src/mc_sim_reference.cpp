#include <cmath>

#include "entroflow/mc_sim.hpp"
#include "mc_sim_detail.hpp"

namespace entroflow::reference {

EnsembleSummary simulate_ou_exact(const SimConfig& cfg) {
  validate(cfg);
  const auto& p = std::get<OUParams>(cfg.params);
  const std::vector<std::size_t> steps = output_steps(cfg);
  const std::size_t total = steps.back();
  const double decay = std::exp(p.a * cfg.dt);
  const double noise = std::sqrt(ou_variance(p, cfg.dt));
  std::vector<std::vector<double>> samples(steps.size(), std::vector<double>(cfg.n_traj));

  for (std::size_t i = 0; i < cfg.n_traj; ++i) {
    Philox4x32 rng(cfg.master_seed, i);
    detail::Normal normal;
    std::vector<double> path(total + 1);
    path[0] = detail::ou_initial_state(cfg.init, rng, normal);
    for (std::size_t k = 0; k < total; ++k) {
      path[k + 1] = decay * path[k] + noise * normal(rng);
    }
    for (std::size_t j = 0; j < steps.size(); ++j) samples[j][i] = path[steps[j]];
  }
  return detail::summarise(cfg, steps, std::move(samples));
}

EnsembleSummary simulate_sdde_em(const SimConfig& cfg) {
  validate(cfg);
  const auto& p = std::get<DelayParams>(cfg.params);
  const auto& history = std::get<InitialCondition>(cfg.init);
  const std::vector<std::size_t> steps = output_steps(cfg);
  const std::size_t total = steps.back();
  const std::size_t lag = delay_steps(p.tau, cfg.dt);
  const double dt = cfg.dt;
  const double noise = p.sigma * std::sqrt(dt);
  std::vector<std::vector<double>> samples(steps.size(), std::vector<double>(cfg.n_traj));

  for (std::size_t i = 0; i < cfg.n_traj; ++i) {
    Philox4x32 rng(cfg.master_seed, i);
    detail::Normal normal;
    // path[lag + k] = x(k dt); path[0..lag] is the history on [-tau, 0].
    std::vector<double> path(lag + total + 1);
    if (const auto* brown = std::get_if<BrownianHistory>(&history)) {
      const double scale = brown->sigma_bar * std::sqrt(dt);
      path[0] = 0.0;
      for (std::size_t k = 1; k <= lag; ++k) path[k] = path[k - 1] + scale * normal(rng);
    } else {
      for (std::size_t k = 0; k <= lag; ++k) {
        path[k] = history_value(history, static_cast<double>(k) * dt - p.tau);
      }
    }
    for (std::size_t k = 0; k < total; ++k) {
      const double x = path[lag + k];
      double next = x + (p.a * x + p.b * path[k]) * dt;
      if (noise > 0.0) next += noise * normal(rng);
      if (!(std::abs(next) <= kBlowUpThreshold)) {
        detail::report_blow_up(i, static_cast<double>(k + 1) * dt, next);
      }
      path[lag + k + 1] = next;
    }
    for (std::size_t j = 0; j < steps.size(); ++j) samples[j][i] = path[lag + steps[j]];
  }
  return detail::summarise(cfg, steps, std::move(samples));
}

}  // namespace entroflow::reference
