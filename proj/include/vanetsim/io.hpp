#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vanetsim/learning_automata.hpp"
#include "vanetsim/simulation.hpp"
#include "vanetsim/street_graph.hpp"

namespace vanetsim {

// Map text file: `intersections N`, N lines `id x y`, `streets M`,
// M lines `id a b`; `#` comments; LF endings.
StreetGraph read_map(std::istream& in);
void write_map(std::ostream& out, const StreetGraph& graph);
StreetGraph read_map_file(const std::string& path);
void write_map_file(const std::string& path, const StreetGraph& graph);

// Cost database: `bucket <label>`, `r <count>`, r lines
// `street_id p_final cost`; cost must equal r(1-p) to 1e-9 on load.
void write_cost_db(std::ostream& out, const TrafficDatabase& db);
TrafficDatabase read_cost_db(std::istream& in);
void write_cost_db_file(const std::string& path, const TrafficDatabase& db);
TrafficDatabase read_cost_db_file(const std::string& path);

// Metrics CSV rows, one per (protocol, seed, pair).
void write_metrics_csv(std::ostream& out, const std::vector<RunResult>& runs);

struct AggregateRow {
    double bucket_lo = 0.0;  // [lo, lo + width)
    Protocol protocol;
    long sent = 0;
    long delivered = 0;
    bool pdr_defined = false;
    double pdr = 0.0;
    double mean_hops = 0.0;
    double stddev_hops = 0.0;
    long n = 0;  // records in the bucket
};

// Pooled PDR per (distance bucket, protocol); hop statistics over delivered
// packets only.
std::vector<AggregateRow> aggregate(const std::vector<RunResult>& runs, double bucket_width);

void write_summary_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

// Config file: `key = value` lines, `#` comments; unknown keys rejected.
SimConfig parse_config(std::istream& in);
SimConfig parse_config_file(const std::string& path);

}  // namespace vanetsim
