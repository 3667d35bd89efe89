#include "vanetsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "vanetsim/io.hpp"

namespace vanetsim {

StreetGraph build_scenario_graph(const SimConfig& cfg) {
    if (!cfg.map_file.empty())
        return read_map_file(cfg.map_file);
    return build_grid(cfg.cols, cfg.rows, cfg.dx, cfg.dy);
}

std::vector<RunResult> run_experiment(const StreetGraph& graph, const SimConfig& cfg) {
    const bool wants_pbla = std::any_of(cfg.protocols.begin(), cfg.protocols.end(),
                                        [](Protocol p) { return p == Protocol::kPbla; });
    CostMatrix costs;
    if (wants_pbla)
        costs = learn_costs(graph, cfg);
    std::vector<RunResult> out;
    out.reserve(cfg.protocols.size());
    for (Protocol p : cfg.protocols)
        out.push_back(run_single(graph, cfg, p, p == Protocol::kPbla ? &costs : nullptr));
    return out;
}

std::vector<RunResult> run_seeds(const StreetGraph& graph, const SimConfig& cfg,
                                 const std::vector<std::uint64_t>& seeds, int threads) {
    std::vector<std::vector<RunResult>> per_seed(seeds.size());
    const auto work = [&](std::size_t i) {
        SimConfig c = cfg;
        c.seed = seeds[i];
        per_seed[i] = run_experiment(graph, c);
    };
    if (threads <= 1) {
        for (std::size_t i = 0; i < seeds.size(); ++i)
            work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const int n = std::min<int>(threads, static_cast<int>(seeds.size()));
        for (int t = 0; t < n; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < seeds.size(); i = next.fetch_add(1))
                    work(i);
            });
        for (auto& t : pool)
            t.join();
    }
    std::vector<RunResult> out;
    for (auto& runs : per_seed)
        for (auto& r : runs)
            out.push_back(std::move(r));
    return out;
}

}  // namespace vanetsim
