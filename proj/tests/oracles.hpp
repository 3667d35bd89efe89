// Test-only oracles, kept independent of the library implementations they
// check.
#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "vanetsim/rng.hpp"
#include "vanetsim/street_graph.hpp"

namespace testoracle {

// Exhaustive simple-path enumeration: minimum (cost, hops) over all simple
// paths. Usable up to ~7 vertices.
inline void enumerate_paths(const vanetsim::StreetGraph& g, const vanetsim::CostMatrix& costs,
                            vanetsim::IntersectionId cur, vanetsim::IntersectionId dst,
                            std::vector<bool>& visited, double cost, long hops, double& best_cost,
                            long& best_hops) {
    if (cur == dst) {
        if (cost < best_cost || (cost == best_cost && hops < best_hops)) {
            best_cost = cost;
            best_hops = hops;
        }
        return;
    }
    for (const auto& e : g.adjacent(cur)) {
        if (visited[static_cast<std::size_t>(e.far)])
            continue;
        visited[static_cast<std::size_t>(e.far)] = true;
        enumerate_paths(g, costs, e.far, dst, visited, cost + costs[e.street], hops + 1,
                        best_cost, best_hops);
        visited[static_cast<std::size_t>(e.far)] = false;
    }
}

struct BestPath {
    double cost;
    long hops;
};

inline std::optional<BestPath> brute_force_shortest(const vanetsim::StreetGraph& g,
                                                    const vanetsim::CostMatrix& costs,
                                                    vanetsim::IntersectionId src,
                                                    vanetsim::IntersectionId dst) {
    std::vector<bool> visited(g.num_intersections(), false);
    visited[static_cast<std::size_t>(src)] = true;
    double best_cost = std::numeric_limits<double>::infinity();
    long best_hops = std::numeric_limits<long>::max();
    enumerate_paths(g, costs, src, dst, visited, 0.0, 0, best_cost, best_hops);
    if (best_cost == std::numeric_limits<double>::infinity())
        return std::nullopt;
    return BestPath{best_cost, best_hops};
}

// Random graph on <= max_vertices distinct lattice positions: a random
// spanning tree plus a few extra edges, so it is always connected.
inline vanetsim::StreetGraph random_connected_graph(vanetsim::Rng& rng, int max_vertices) {
    const int n = 2 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(max_vertices - 1)));
    std::vector<vanetsim::Intersection> vs;
    std::vector<std::pair<int, int>> used;
    for (int i = 0; i < n; ++i) {
        for (;;) {
            const int x = static_cast<int>(rng.uniform_index(8));
            const int y = static_cast<int>(rng.uniform_index(8));
            bool dup = false;
            for (auto [ux, uy] : used)
                dup = dup || (ux == x && uy == y);
            if (!dup) {
                used.push_back({x, y});
                vs.push_back({i, {x * 100.0, y * 100.0}});
                break;
            }
        }
    }
    std::vector<vanetsim::Street> es;
    const auto add_edge = [&](int a, int b) {
        if (a == b)
            return;
        for (const auto& s : es)
            if ((s.a == a && s.b == b) || (s.a == b && s.b == a))
                return;
        es.push_back({static_cast<vanetsim::StreetId>(es.size()), a, b,
                      vanetsim::distance(vs[static_cast<std::size_t>(a)].position,
                                         vs[static_cast<std::size_t>(b)].position)});
    };
    for (int i = 1; i < n; ++i)
        add_edge(i, static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(i))));
    const int extra = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    for (int k = 0; k < extra; ++k)
        add_edge(static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n))),
                 static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n))));
    return vanetsim::StreetGraph(std::move(vs), std::move(es));
}

inline vanetsim::CostMatrix random_costs(vanetsim::Rng& rng, std::size_t streets) {
    vanetsim::CostMatrix m;
    for (std::size_t i = 0; i < streets; ++i)
        m.cost.push_back(rng.uniform(0.0, 10.0) + 1e-6);  // (0, 10]
    return m;
}

}  // namespace testoracle
