#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vanetsim/experiment.hpp"
#include "vanetsim/io.hpp"

namespace {

using namespace vanetsim;

std::vector<std::uint64_t> parse_seed_list(const std::string& spec) {
    // "1..10" or "1,2,5"
    std::vector<std::uint64_t> seeds;
    const auto dots = spec.find("..");
    if (dots != std::string::npos) {
        const auto lo = std::stoull(spec.substr(0, dots));
        const auto hi = std::stoull(spec.substr(dots + 2));
        if (hi < lo)
            throw std::invalid_argument("seed range is empty: " + spec);
        for (auto s = lo; s <= hi; ++s)
            seeds.push_back(s);
        return seeds;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ','))
        seeds.push_back(std::stoull(tok));
    if (seeds.empty())
        throw std::invalid_argument("no seeds in: " + spec);
    return seeds;
}

std::vector<Protocol> parse_protocol_list(const std::string& spec) {
    std::vector<Protocol> out;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto p = parse_protocol(tok);
        if (!p)
            throw std::invalid_argument("unknown protocol '" + tok +
                                        "' (valid: gpsr, gpcr, pbla)");
        out.push_back(*p);
    }
    if (out.empty())
        throw std::invalid_argument("no protocols in: " + spec);
    return out;
}

int cmd_gen_scenario(int cols, int rows, double dx, double dy, const std::string& out_path) {
    write_map_file(out_path, build_grid(cols, rows, dx, dy));
    return 0;
}

int cmd_learn(const std::string& config_path, const std::string& out_path,
              const std::string& bucket) {
    const SimConfig cfg = parse_config_file(config_path);
    const StreetGraph graph = build_scenario_graph(cfg);
    TrafficDatabase db;
    TrafficBucket b;
    b.costs = learn_costs(graph, cfg, &b.p_final);
    db.buckets.emplace(bucket, std::move(b));
    write_cost_db_file(out_path, db);
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& protocol_name,
            const std::string& costs_path, const std::string& out_path) {
    const auto protocol = parse_protocol(protocol_name);
    if (!protocol)
        throw std::invalid_argument("unknown protocol '" + protocol_name +
                                    "' (valid: gpsr, gpcr, pbla)");
    const SimConfig cfg = parse_config_file(config_path);
    const StreetGraph graph = build_scenario_graph(cfg);
    CostMatrix costs;
    if (*protocol == Protocol::kPbla) {
        if (costs_path.empty())
            throw std::invalid_argument("--costs is required for protocol pbla");
        const TrafficDatabase db = read_cost_db_file(costs_path);
        const TrafficBucket& bucket = db.buckets.begin()->second;
        if (bucket.costs.size() != graph.num_streets())
            throw std::invalid_argument("--costs street count does not match the map");
        costs = bucket.costs;
    }
    const RunResult result =
        run_single(graph, cfg, *protocol, *protocol == Protocol::kPbla ? &costs : nullptr);
    std::ofstream out(out_path);
    if (!out)
        throw std::runtime_error("cannot write file: " + out_path);
    write_metrics_csv(out, {result});
    return 0;
}

int cmd_compare(const std::string& config_path, const std::string& protocols_spec,
                const std::string& seeds_spec, const std::string& out_path, double bucket_width,
                int threads, const std::string& metrics_path) {
    SimConfig cfg = parse_config_file(config_path);
    if (!protocols_spec.empty())
        cfg.protocols = parse_protocol_list(protocols_spec);
    const std::vector<std::uint64_t> seeds = parse_seed_list(seeds_spec);
    const StreetGraph graph = build_scenario_graph(cfg);
    const auto runs = run_seeds(graph, cfg, seeds, threads);
    std::ofstream out(out_path);
    if (!out)
        throw std::runtime_error("cannot write file: " + out_path);
    write_summary_csv(out, aggregate(runs, bucket_width));
    if (!metrics_path.empty()) {
        std::ofstream mout(metrics_path);
        if (!mout)
            throw std::runtime_error("cannot write file: " + metrics_path);
        write_metrics_csv(mout, runs);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"VANET position-based routing simulator (GPSR / GPCR / PBLA)"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen-scenario", "Write a grid map file");
    int cols = 3, rows = 6;
    double dx = 1000.0, dy = 500.0;
    std::string out_path;
    gen->add_option("--cols", cols, "Grid columns")->check(CLI::PositiveNumber);
    gen->add_option("--rows", rows, "Grid rows")->check(CLI::PositiveNumber);
    gen->add_option("--dx", dx, "Column spacing in meters")->check(CLI::PositiveNumber);
    gen->add_option("--dy", dy, "Row spacing in meters")->check(CLI::PositiveNumber);
    gen->add_option("--out", out_path, "Output map file")->required();

    auto* learn = app.add_subcommand("learn", "Run the learning phase, write a cost database");
    std::string config_path, bucket = "default";
    learn->add_option("--config", config_path, "Config file")->required();
    learn->add_option("--out", out_path, "Output cost database")->required();
    learn->add_option("--bucket", bucket, "Time bucket label");

    auto* run = app.add_subcommand("run", "Single protocol run, write per-pair metrics CSV");
    std::string protocol_name_opt, costs_path;
    run->add_option("--config", config_path, "Config file")->required();
    run->add_option("--protocol", protocol_name_opt, "gpsr | gpcr | pbla")->required();
    run->add_option("--costs", costs_path, "Cost database (required for pbla)");
    run->add_option("--out", out_path, "Output metrics CSV")->required();

    auto* compare = app.add_subcommand("compare", "Multi-seed comparison, write summary CSV");
    std::string protocols_spec, seeds_spec = "1..10", metrics_path;
    double bucket_width = 250.0;
    int threads = 1;
    compare->add_option("--config", config_path, "Config file")->required();
    compare->add_option("--protocols", protocols_spec, "Comma-separated protocol list");
    compare->add_option("--seeds", seeds_spec, "Seed list: '1..10' or '1,3,7'");
    compare->add_option("--out", out_path, "Output summary CSV")->required();
    compare->add_option("--bucket-width", bucket_width, "Distance bucket width in meters")
        ->check(CLI::PositiveNumber);
    compare->add_option("--threads", threads, "Parallel workers over seeds")
        ->check(CLI::PositiveNumber);
    compare->add_option("--metrics-out", metrics_path, "Also write per-pair metrics CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen_scenario(cols, rows, dx, dy, out_path);
        if (learn->parsed())
            return cmd_learn(config_path, out_path, bucket);
        if (run->parsed())
            return cmd_run(config_path, protocol_name_opt, costs_path, out_path);
        if (compare->parsed())
            return cmd_compare(config_path, protocols_spec, seeds_spec, out_path, bucket_width,
                               threads, metrics_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
