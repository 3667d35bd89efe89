#pragma once

#include <vector>

#include "vanetsim/simulation.hpp"

namespace vanetsim {

// Graph per the config: map file when given, generated grid otherwise.
StreetGraph build_scenario_graph(const SimConfig& cfg);

// Full experiment for one seed: learning phase (when PBLA is selected),
// then one run per protocol over identical mobility and pair schedules.
std::vector<RunResult> run_experiment(const StreetGraph& graph, const SimConfig& cfg);

// Multi-seed sweep; runs may be executed on `threads` workers, results are
// collected in (seed, protocol) order either way.
std::vector<RunResult> run_seeds(const StreetGraph& graph, const SimConfig& cfg,
                                 const std::vector<std::uint64_t>& seeds, int threads = 1);

}  // namespace vanetsim
