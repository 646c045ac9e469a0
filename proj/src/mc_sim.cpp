#include "entroflow/mc_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "entroflow/parallel.hpp"
#include "mc_sim_detail.hpp"

namespace entroflow {

namespace {

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

Histogram make_histogram(std::span<const double> xs, std::size_t bins) {
  Histogram h;
  const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + width * static_cast<double>(i);
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  for (double x : xs) {
    auto idx = static_cast<std::size_t>((x - lo) / width);
    ++h.counts[std::min(idx, bins - 1)];
  }
  return h;
}

}  // namespace

std::size_t delay_steps(double tau, double dt) {
  const double ratio = tau / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, rounded)) {
    std::ostringstream msg;
    msg << "tau/dt must be a positive integer (tau=" << tau << ", dt=" << dt << ")";
    throw std::invalid_argument(msg.str());
  }
  return static_cast<std::size_t>(rounded);
}

void validate(const SimConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
    throw std::invalid_argument("SimConfig: dt must be > 0");
  }
  if (!(cfg.t_max >= cfg.dt) || !std::isfinite(cfg.t_max)) {
    throw std::invalid_argument("SimConfig: t_max must be >= dt");
  }
  if (cfg.n_traj < 2) throw std::invalid_argument("SimConfig: n_traj must be >= 2");
  if (cfg.histogram_bins == 1) {
    throw std::invalid_argument("SimConfig: histogram needs at least 2 bins");
  }
  if (const auto* ou = std::get_if<OUParams>(&cfg.params)) {
    validate(*ou);
    if (const auto* hist = std::get_if<InitialCondition>(&cfg.init)) {
      if (!std::holds_alternative<PointHistory>(*hist)) {
        throw std::invalid_argument(
            "SimConfig: the OU model takes a PointHistory or a Gaussian initial law");
      }
    } else {
      validate(std::get<Gaussian1D>(cfg.init));
    }
  } else {
    const auto& p = std::get<DelayParams>(cfg.params);
    validate(p);
    delay_steps(p.tau, cfg.dt);
    const auto* hist = std::get_if<InitialCondition>(&cfg.init);
    if (hist == nullptr) {
      throw std::invalid_argument("SimConfig: the delay model needs a history on [-tau, 0]");
    }
    if (const auto* table = std::get_if<TabulatedHistory>(hist)) table->check_span(p.tau);
    if (const auto* brown = std::get_if<BrownianHistory>(hist)) {
      if (!(brown->sigma_bar > 0.0)) {
        throw std::invalid_argument("SimConfig: sigma_bar must be > 0");
      }
    }
  }
  output_steps(cfg);
}

std::vector<std::size_t> output_steps(const SimConfig& cfg) {
  const std::vector<double> times =
      cfg.output_times.empty() ? std::vector<double>{cfg.t_max} : cfg.output_times;
  std::vector<std::size_t> steps;
  for (double t : times) {
    const double q = t / cfg.dt;
    const double k = std::round(q);
    if (!(t > 0.0) || t > cfg.t_max * (1.0 + 1e-12) ||
        std::abs(q - k) > 1e-9 * std::max(1.0, k)) {
      std::ostringstream msg;
      msg << "SimConfig: output time " << t << " is not a positive multiple of dt="
          << cfg.dt << " within t_max=" << cfg.t_max;
      throw std::invalid_argument(msg.str());
    }
    if (!steps.empty() && static_cast<std::size_t>(k) <= steps.back()) {
      throw std::invalid_argument("SimConfig: output times must be strictly increasing");
    }
    steps.push_back(static_cast<std::size_t>(k));
  }
  return steps;
}

SampleMoments sample_moments(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("sample_moments: need at least 2 samples");
  KahanSum sum;
  for (double x : samples) sum.add(x);
  const double mean = sum.sum / static_cast<double>(n);
  KahanSum m2;
  KahanSum m4;
  for (double x : samples) {
    const double d = x - mean;
    const double d2 = d * d;
    m2.add(d2);
    m4.add(d2 * d2);
  }
  const double dn = static_cast<double>(n);
  SampleMoments out;
  out.mean = mean;
  out.variance = m2.sum / (dn - 1.0);
  out.mean_se = std::sqrt(out.variance / dn);
  const double c2 = m2.sum / dn;
  const double c4 = m4.sum / dn;
  out.variance_se = std::sqrt(std::max(0.0, c4 - c2 * c2) / dn);
  return out;
}

namespace detail {

EnsembleSummary summarise(const SimConfig& cfg, const std::vector<std::size_t>& steps,
                          std::vector<std::vector<double>> samples) {
  EnsembleSummary out;
  out.n_traj = cfg.n_traj;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const SampleMoments m = sample_moments(samples[k]);
    out.time.push_back(static_cast<double>(steps[k]) * cfg.dt);
    out.mean.push_back(m.mean);
    out.variance.push_back(m.variance);
    out.mean_se.push_back(m.mean_se);
    out.variance_se.push_back(m.variance_se);
    if (cfg.histogram_bins > 0) {
      out.histograms.push_back(make_histogram(samples[k], cfg.histogram_bins));
    }
  }
  if (cfg.keep_samples) out.samples = std::move(samples);
  return out;
}

double ou_initial_state(const SimInit& init, Philox4x32& rng, Normal& normal) {
  if (const auto* law = std::get_if<Gaussian1D>(&init)) {
    return law->mean + std::sqrt(law->variance) * normal(rng);
  }
  return std::get<PointHistory>(std::get<InitialCondition>(init)).value;
}

void report_blow_up(std::size_t trajectory, double t, double x) {
  std::ostringstream msg;
  msg << "trajectory " << trajectory << " blew up at t=" << t << " (|x|=" << std::abs(x)
      << " > " << kBlowUpThreshold << "); parameters are likely unstable";
  throw SimulationError(msg.str());
}

}  // namespace detail

EnsembleSummary simulate_ou_exact(const SimConfig& cfg, int threads) {
  validate(cfg);
  const auto* p = std::get_if<OUParams>(&cfg.params);
  if (p == nullptr) throw std::invalid_argument("simulate_ou_exact: needs OU parameters");
  const std::vector<std::size_t> steps = output_steps(cfg);
  const double decay = std::exp(p->a * cfg.dt);
  const double noise = std::sqrt(ou_variance(*p, cfg.dt));
  std::vector<std::vector<double>> samples(steps.size(), std::vector<double>(cfg.n_traj));

  parallel_for(cfg.n_traj, threads, [&](std::size_t i) {
    Philox4x32 rng(cfg.master_seed, i);
    detail::Normal normal;
    double x = detail::ou_initial_state(cfg.init, rng, normal);
    std::size_t next = 0;
    for (std::size_t k = 1; next < steps.size(); ++k) {
      x = decay * x + noise * normal(rng);
      if (k == steps[next]) samples[next++][i] = x;
    }
  });
  return detail::summarise(cfg, steps, std::move(samples));
}

EnsembleSummary simulate_sdde_em(const SimConfig& cfg, int threads) {
  validate(cfg);
  const auto* p = std::get_if<DelayParams>(&cfg.params);
  if (p == nullptr) throw std::invalid_argument("simulate_sdde_em: needs delay parameters");
  const InitialCondition& history = std::get<InitialCondition>(cfg.init);
  const std::vector<std::size_t> steps = output_steps(cfg);
  const std::size_t lag = delay_steps(p->tau, cfg.dt);
  const double dt = cfg.dt;
  const double noise = p->sigma * std::sqrt(dt);
  std::vector<std::vector<double>> samples(steps.size(), std::vector<double>(cfg.n_traj));

  parallel_for(cfg.n_traj, threads, [&](std::size_t i) {
    Philox4x32 rng(cfg.master_seed, i);
    detail::Normal normal;
    // ring[k % (lag + 1)] holds x at grid step k - lag (history starts at k = 0).
    std::vector<double> ring(lag + 1);
    if (const auto* brown = std::get_if<BrownianHistory>(&history)) {
      const double scale = brown->sigma_bar * std::sqrt(dt);
      ring[0] = 0.0;
      for (std::size_t k = 1; k <= lag; ++k) ring[k] = ring[k - 1] + scale * normal(rng);
    } else {
      for (std::size_t k = 0; k <= lag; ++k) {
        ring[k] = history_value(history, static_cast<double>(k) * dt - p->tau);
      }
    }
    double x = ring[lag];
    std::size_t slot = 0;  // position of x_{k - lag}, overwritten by x_{k+1}
    std::size_t next = 0;
    for (std::size_t k = 1; next < steps.size(); ++k) {
      const double delayed = ring[slot];
      double step = x + (p->a * x + p->b * delayed) * dt;
      if (noise > 0.0) step += noise * normal(rng);
      x = step;
      ring[slot] = x;
      slot = slot == lag ? 0 : slot + 1;
      if (!(std::abs(x) <= kBlowUpThreshold)) {
        detail::report_blow_up(i, static_cast<double>(k) * dt, x);
      }
      if (k == steps[next]) samples[next++][i] = x;
    }
  });
  return detail::summarise(cfg, steps, std::move(samples));
}

double em_variance_exact(const DelayParams& p, double dt, double t) {
  validate(p);
  const std::size_t lag = delay_steps(p.tau, dt);
  const double k_real = std::round(t / dt);
  if (!(t > 0.0) || std::abs(t / dt - k_real) > 1e-9 * std::max(1.0, k_real)) {
    throw std::invalid_argument("em_variance_exact: t must be a positive multiple of dt");
  }
  const auto steps = static_cast<std::size_t>(k_real);
  std::vector<double> g(steps);
  g[0] = 1.0;
  for (std::size_t k = 0; k + 1 < steps; ++k) {
    const double delayed = k >= lag ? g[k - lag] : 0.0;
    g[k + 1] = (1.0 + p.a * dt) * g[k] + p.b * dt * delayed;
  }
  KahanSum sum;
  for (double v : g) sum.add(v * v);
  return p.sigma * p.sigma * dt * sum.sum;
}

double estimate_entropy_gaussian_plugin(std::span<const double> samples) {
  if (samples.size() < 2) {
    throw std::invalid_argument("estimate_entropy_gaussian_plugin: need n >= 2");
  }
  const double var = sample_moments(samples).variance;
  if (!(var > 0.0)) {
    throw std::domain_error("estimate_entropy_gaussian_plugin: zero sample variance");
  }
  return 0.5 + 0.5 * std::log(2.0 * std::numbers::pi * var);
}

double estimate_entropy_histogram(std::span<const double> samples, std::size_t n_bins) {
  if (n_bins < 10) throw std::invalid_argument("estimate_entropy_histogram: need >= 10 bins");
  if (samples.size() < 1000) {
    throw std::invalid_argument("estimate_entropy_histogram: need n >= 1000");
  }
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  if (!(*hi_it > *lo_it)) {
    throw std::domain_error("estimate_entropy_histogram: samples have zero range");
  }
  const Histogram h = make_histogram(samples, n_bins);
  const double width = (*hi_it - *lo_it) / static_cast<double>(n_bins);
  const double n = static_cast<double>(samples.size());
  KahanSum sum;
  for (std::size_t c : h.counts) {
    if (c == 0) continue;
    const double prob = static_cast<double>(c) / n;
    sum.add(-prob * std::log(prob / width));
  }
  return sum.sum;
}

double estimate_conditional_entropy(std::span<const double> samples,
                                    const Gaussian1D& fstar) {
  if (samples.size() < 1000) {
    throw std::invalid_argument("estimate_conditional_entropy: need n >= 1000");
  }
  const SampleMoments m = sample_moments(samples);
  if (!(m.variance > 0.0)) {
    throw std::domain_error("estimate_conditional_entropy: zero sample variance");
  }
  return conditional_entropy(Gaussian1D{m.mean, m.variance}, fstar);
}

}  // namespace entroflow
