#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vanetsim/learning_automata.hpp"
#include "vanetsim/mobility.hpp"
#include "vanetsim/protocols.hpp"
#include "vanetsim/simcore.hpp"
#include "vanetsim/street_graph.hpp"

namespace vanetsim {

struct SimConfig {
    // map: generated grid unless a map file/graph is supplied by the caller
    int cols = 3;
    int rows = 6;
    double dx = 1000.0;
    double dy = 500.0;
    std::string map_file;    // optional, overrides the grid
    std::string trace_file;  // optional, replaces synthetic mobility

    int vehicles = 150;
    RadioConfig radio;            // 500 m, 18 Mb/s, D_int 15 m
    long packet_size = 512;       // bytes
    double duration = 600.0;      // s
    int pairs = 10;
    std::vector<Protocol> protocols{Protocol::kGpsr, Protocol::kGpcr, Protocol::kPbla};

    double learn_a = 0.1;
    double learn_b = 0.1;
    std::optional<std::size_t> learn_iterations;  // default 50 * street count

    MobilityOptions mobility;  // [8, 14] m/s, dt 0.5 s

    int ttl = 64;
    double t_retry = 2.0;        // s buffered on local maximum
    double beacon_period = 1.0;  // s; expiry is 3 periods
    double emission_interval = 5.0;  // s between packets per pair
    double emission_start = 1.0;     // first packet after initial beacons

    std::uint64_t seed = 1;
};

struct PairSchedule {
    VehicleId source;
    VehicleId destination;
};

struct PairMetrics {
    int pair = 0;
    double distance_m = 0.0;  // source-destination distance at first origination
    long sent = 0;
    long delivered = 0;
    std::vector<int> hop_counts;  // delivered packets only
    long drops_ttl = 0;
    long drops_retry = 0;
    long drops_nopath = 0;
};

struct RunResult {
    Protocol protocol;
    std::uint64_t seed;
    std::vector<PairMetrics> pairs;
};

// Source-destination pairs drawn from the seed's dedicated substream, so
// every protocol replays the identical schedule.
std::vector<PairSchedule> draw_pairs(int pair_count, const std::vector<VehicleId>& vehicles,
                                     Rng& rng);

// Learning phase for PBLA: drives a synthetic mobility rollout (or the
// trace) and feeds per-street densities to the automaton.
CostMatrix learn_costs(const StreetGraph& graph, const SimConfig& cfg,
                       std::vector<double>* p_final = nullptr);

// One deterministic (protocol, seed) run. `costs` is required for PBLA.
RunResult run_single(const StreetGraph& graph, const SimConfig& cfg, Protocol protocol,
                     const CostMatrix* costs);

}  // namespace vanetsim
