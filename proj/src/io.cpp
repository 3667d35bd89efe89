#include "vanetsim/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace vanetsim {

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open file: " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write file: " + path);
    return out;
}

// Lines with comments and blanks stripped.
std::vector<std::string> content_lines(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
            line.pop_back();
        if (!line.empty())
            lines.push_back(line);
    }
    return lines;
}

}  // namespace

StreetGraph read_map(std::istream& in) {
    const auto lines = content_lines(in);
    std::size_t i = 0;
    const auto expect_count = [&](const std::string& keyword) {
        if (i >= lines.size())
            throw std::invalid_argument("map file: missing '" + keyword + "' section");
        std::istringstream ss(lines[i++]);
        std::string kw;
        long n = -1;
        ss >> kw >> n;
        if (kw != keyword || n < 0)
            throw std::invalid_argument("map file: expected '" + keyword + " N'");
        return static_cast<std::size_t>(n);
    };

    const std::size_t nv = expect_count("intersections");
    std::vector<Intersection> intersections;
    for (std::size_t k = 0; k < nv; ++k) {
        if (i >= lines.size())
            throw std::invalid_argument("map file: truncated intersection list");
        std::istringstream ss(lines[i++]);
        Intersection v{};
        if (!(ss >> v.id >> v.position.x >> v.position.y))
            throw std::invalid_argument("map file: bad intersection line: " + lines[i - 1]);
        intersections.push_back(v);
    }
    const std::size_t ne = expect_count("streets");
    std::vector<Street> streets;
    for (std::size_t k = 0; k < ne; ++k) {
        if (i >= lines.size())
            throw std::invalid_argument("map file: truncated street list");
        std::istringstream ss(lines[i++]);
        Street s{};
        if (!(ss >> s.id >> s.a >> s.b))
            throw std::invalid_argument("map file: bad street line: " + lines[i - 1]);
        if (s.a < 0 || static_cast<std::size_t>(s.a) >= intersections.size() || s.b < 0 ||
            static_cast<std::size_t>(s.b) >= intersections.size())
            throw std::invalid_argument("map file: street endpoint out of range");
        s.length = distance(intersections[static_cast<std::size_t>(s.a)].position,
                            intersections[static_cast<std::size_t>(s.b)].position);
        streets.push_back(s);
    }
    return StreetGraph(std::move(intersections), std::move(streets));
}

void write_map(std::ostream& out, const StreetGraph& graph) {
    out << std::setprecision(17);
    out << "intersections " << graph.num_intersections() << "\n";
    for (const Intersection& v : graph.intersections())
        out << v.id << " " << v.position.x << " " << v.position.y << "\n";
    out << "streets " << graph.num_streets() << "\n";
    for (const Street& s : graph.streets())
        out << s.id << " " << s.a << " " << s.b << "\n";
}

StreetGraph read_map_file(const std::string& path) {
    auto in = open_in(path);
    return read_map(in);
}

void write_map_file(const std::string& path, const StreetGraph& graph) {
    auto out = open_out(path);
    write_map(out, graph);
}

void write_cost_db(std::ostream& out, const TrafficDatabase& db) {
    out << std::setprecision(17);
    for (const auto& [label, bucket] : db.buckets) {
        out << "bucket " << label << "\n";
        out << "r " << bucket.costs.size() << "\n";
        for (std::size_t s = 0; s < bucket.costs.size(); ++s)
            out << s << " " << bucket.p_final.at(s) << " " << bucket.costs.cost[s] << "\n";
    }
}

TrafficDatabase read_cost_db(std::istream& in) {
    const auto lines = content_lines(in);
    TrafficDatabase db;
    std::size_t i = 0;
    while (i < lines.size()) {
        std::istringstream head(lines[i++]);
        std::string kw, label;
        head >> kw >> label;
        if (kw != "bucket" || label.empty())
            throw std::invalid_argument("cost db: expected 'bucket <label>'");
        if (i >= lines.size())
            throw std::invalid_argument("cost db: missing 'r <count>'");
        std::istringstream rline(lines[i++]);
        std::string rkw;
        long r = -1;
        rline >> rkw >> r;
        if (rkw != "r" || r < 1)
            throw std::invalid_argument("cost db: expected 'r <count>'");
        TrafficBucket bucket;
        bucket.costs.cost.assign(static_cast<std::size_t>(r), 0.0);
        bucket.p_final.assign(static_cast<std::size_t>(r), 0.0);
        for (long k = 0; k < r; ++k) {
            if (i >= lines.size())
                throw std::invalid_argument("cost db: truncated bucket " + label);
            std::istringstream ss(lines[i++]);
            long sid = -1;
            double p = 0.0, c = 0.0;
            if (!(ss >> sid >> p >> c) || sid < 0 || sid >= r)
                throw std::invalid_argument("cost db: bad street line: " + lines[i - 1]);
            if (p < 0.0 || p > 1.0)
                throw std::invalid_argument("cost db: probability out of [0,1]");
            if (std::abs(c - static_cast<double>(r) * (1.0 - p)) > 1e-9)
                throw std::invalid_argument("cost db: cost != r(1-p) for street " +
                                            std::to_string(sid));
            bucket.p_final[static_cast<std::size_t>(sid)] = p;
            bucket.costs.cost[static_cast<std::size_t>(sid)] = c;
        }
        if (!db.buckets.emplace(label, std::move(bucket)).second)
            throw std::invalid_argument("cost db: duplicate bucket " + label);
    }
    if (db.buckets.empty())
        throw std::invalid_argument("cost db: no buckets");
    return db;
}

void write_cost_db_file(const std::string& path, const TrafficDatabase& db) {
    auto out = open_out(path);
    write_cost_db(out, db);
}

TrafficDatabase read_cost_db_file(const std::string& path) {
    auto in = open_in(path);
    return read_cost_db(in);
}

namespace {

std::string fmt(double v, int digits = 6) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(digits) << v;
    return ss.str();
}

}  // namespace

void write_metrics_csv(std::ostream& out, const std::vector<RunResult>& runs) {
    out << "protocol,seed,pair,distance_m,sent,delivered,mean_hops,"
           "drops_ttl,drops_retry,drops_nopath\n";
    for (const RunResult& run : runs) {
        for (const PairMetrics& m : run.pairs) {
            double mean_hops = 0.0;
            for (int h : m.hop_counts)
                mean_hops += h;
            if (!m.hop_counts.empty())
                mean_hops /= static_cast<double>(m.hop_counts.size());
            out << protocol_name(run.protocol) << "," << run.seed << "," << m.pair << ","
                << fmt(m.distance_m, 2) << "," << m.sent << "," << m.delivered << ","
                << (m.hop_counts.empty() ? "NA" : fmt(mean_hops, 4)) << "," << m.drops_ttl << ","
                << m.drops_retry << "," << m.drops_nopath << "\n";
        }
    }
}

std::vector<AggregateRow> aggregate(const std::vector<RunResult>& runs, double bucket_width) {
    if (bucket_width <= 0.0)
        throw std::invalid_argument("bucket width must be positive");
    struct Acc {
        long sent = 0;
        long delivered = 0;
        long n = 0;
        std::vector<int> hops;
    };
    std::map<std::pair<long, std::string>, std::pair<Protocol, Acc>> acc;
    for (const RunResult& run : runs) {
        for (const PairMetrics& m : run.pairs) {
            const long bucket = static_cast<long>(std::floor(m.distance_m / bucket_width));
            auto& slot = acc[{bucket, protocol_name(run.protocol)}];
            slot.first = run.protocol;
            slot.second.sent += m.sent;
            slot.second.delivered += m.delivered;
            slot.second.n += 1;
            slot.second.hops.insert(slot.second.hops.end(), m.hop_counts.begin(),
                                    m.hop_counts.end());
        }
    }
    std::vector<AggregateRow> rows;
    for (const auto& [key, slot] : acc) {
        const Acc& a = slot.second;
        AggregateRow row;
        row.bucket_lo = static_cast<double>(key.first) * bucket_width;
        row.protocol = slot.first;
        row.sent = a.sent;
        row.delivered = a.delivered;
        row.n = a.n;
        if (a.sent > 0) {
            row.pdr_defined = true;
            row.pdr = static_cast<double>(a.delivered) / static_cast<double>(a.sent);
        }
        if (!a.hops.empty()) {
            double mean = 0.0;
            for (int h : a.hops)
                mean += h;
            mean /= static_cast<double>(a.hops.size());
            double var = 0.0;
            for (int h : a.hops)
                var += (h - mean) * (h - mean);
            var /= static_cast<double>(a.hops.size());
            row.mean_hops = mean;
            row.stddev_hops = std::sqrt(var);
        }
        rows.push_back(row);
    }
    return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
    out << "bucket_lo_m,protocol,sent,delivered,pdr,mean_hops,stddev_hops,n\n";
    for (const AggregateRow& r : rows) {
        out << fmt(r.bucket_lo, 0) << "," << protocol_name(r.protocol) << "," << r.sent << ","
            << r.delivered << "," << (r.pdr_defined ? fmt(r.pdr, 6) : "NA") << ","
            << (r.delivered > 0 ? fmt(r.mean_hops, 4) : "NA") << ","
            << (r.delivered > 0 ? fmt(r.stddev_hops, 4) : "NA") << "," << r.n << "\n";
    }
}

SimConfig parse_config(std::istream& in) {
    SimConfig cfg;
    const auto lines = content_lines(in);
    for (const std::string& line : lines) {
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected 'key = value': " + line);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config: empty key or value: " + line);
        const auto num = [&] { return std::stod(value); };
        if (key == "cols") cfg.cols = static_cast<int>(num());
        else if (key == "rows") cfg.rows = static_cast<int>(num());
        else if (key == "dx") cfg.dx = num();
        else if (key == "dy") cfg.dy = num();
        else if (key == "map_file") cfg.map_file = value;
        else if (key == "trace_file") cfg.trace_file = value;
        else if (key == "vehicles") cfg.vehicles = static_cast<int>(num());
        else if (key == "tx_range") cfg.radio.tx_range = num();
        else if (key == "bitrate") cfg.radio.bitrate = num();
        else if (key == "processing_delay") cfg.radio.processing_delay = num();
        else if (key == "d_int") cfg.radio.intersection_zone = num();
        else if (key == "street_tol") cfg.radio.street_tol = num();
        else if (key == "obstacles") cfg.radio.obstacles = value == "true" || value == "1";
        else if (key == "packet_size") cfg.packet_size = static_cast<long>(num());
        else if (key == "duration") cfg.duration = num();
        else if (key == "pairs") cfg.pairs = static_cast<int>(num());
        else if (key == "protocols") {
            cfg.protocols.clear();
            std::stringstream ss(value);
            std::string name;
            while (std::getline(ss, name, ',')) {
                const auto p = parse_protocol(trim(name));
                if (!p)
                    throw std::invalid_argument("config: unknown protocol '" + name +
                                                "' (valid: gpsr, gpcr, pbla)");
                cfg.protocols.push_back(*p);
            }
        }
        else if (key == "learn_a") cfg.learn_a = num();
        else if (key == "learn_b") cfg.learn_b = num();
        else if (key == "learn_iterations") cfg.learn_iterations = static_cast<std::size_t>(num());
        else if (key == "v_min") cfg.mobility.v_min = num();
        else if (key == "v_max") cfg.mobility.v_max = num();
        else if (key == "dt") cfg.mobility.dt = num();
        else if (key == "ttl") cfg.ttl = static_cast<int>(num());
        else if (key == "t_retry") cfg.t_retry = num();
        else if (key == "beacon_period") cfg.beacon_period = num();
        else if (key == "emission_interval") cfg.emission_interval = num();
        else if (key == "emission_start") cfg.emission_start = num();
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(num());
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }

    const auto positive = [](double v, const char* name) {
        if (!(v > 0.0))
            throw std::invalid_argument(std::string("config: ") + name + " must be positive");
    };
    positive(cfg.radio.tx_range, "tx_range");
    positive(cfg.radio.bitrate, "bitrate");
    positive(static_cast<double>(cfg.packet_size), "packet_size");
    positive(cfg.mobility.dt, "dt");
    positive(cfg.beacon_period, "beacon_period");
    positive(cfg.emission_interval, "emission_interval");
    if (cfg.duration < 0.0)
        throw std::invalid_argument("config: duration must be nonnegative");
    if (cfg.vehicles < 2)
        throw std::invalid_argument("config: vehicles must be at least 2");
    if (cfg.pairs < 1)
        throw std::invalid_argument("config: pairs must be at least 1");
    if (cfg.ttl < 1)
        throw std::invalid_argument("config: ttl must be at least 1");
    if (cfg.mobility.v_min < 0.0 || cfg.mobility.v_max < cfg.mobility.v_min)
        throw std::invalid_argument("config: need 0 <= v_min <= v_max");
    return cfg;
}

SimConfig parse_config_file(const std::string& path) {
    auto in = open_in(path);
    return parse_config(in);
}

}  // namespace vanetsim
