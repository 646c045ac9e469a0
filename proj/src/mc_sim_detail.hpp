#ifndef ENTROFLOW_SRC_MC_SIM_DETAIL_HPP_
#define ENTROFLOW_SRC_MC_SIM_DETAIL_HPP_

#include <random>
#include <vector>

#include "entroflow/mc_sim.hpp"
#include "entroflow/philox.hpp"

namespace entroflow::detail {

using Normal = std::normal_distribution<double>;

// Summary over samples[k][i] (output k, trajectory i), reduced in trajectory
// order.
EnsembleSummary summarise(const SimConfig& cfg, const std::vector<std::size_t>& steps,
                          std::vector<std::vector<double>> samples);

// Draws x(0) for the OU model from the trajectory's stream.
double ou_initial_state(const SimInit& init, Philox4x32& rng, Normal& normal);

[[noreturn]] void report_blow_up(std::size_t trajectory, double t, double x);

}  // namespace entroflow::detail

#endif  // ENTROFLOW_SRC_MC_SIM_DETAIL_HPP_
