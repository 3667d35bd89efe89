#include "vanetsim/mobility.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace vanetsim {

namespace {

double draw_speed(const MobilityOptions& opts, Rng& rng) {
    if (opts.v_max == opts.v_min)
        return opts.v_min;
    return rng.uniform(opts.v_min, opts.v_max);
}

IntersectionId other_endpoint(const Street& s, IntersectionId v) {
    return s.a == v ? s.b : s.a;
}

// Pick the next street at intersection `at`, coming in on street `from`.
// No immediate U-turn unless `at` is a dead end.
StreetId pick_next_street(const StreetGraph& graph, IntersectionId at, StreetId from, Rng& rng) {
    const auto& adj = graph.adjacent(at);
    std::vector<StreetId> options;
    for (const AdjacencyEntry& e : adj)
        if (e.street != from)
            options.push_back(e.street);
    if (options.empty())
        return from;
    return options[static_cast<std::size_t>(rng.uniform_index(options.size()))];
}

}  // namespace

std::vector<VehicleState> place_random(const StreetGraph& graph, int count,
                                       const MobilityOptions& opts, Rng& rng) {
    std::vector<VehicleState> states;
    states.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const auto sid =
            static_cast<StreetId>(rng.uniform_index(graph.num_streets()));
        const Street& s = graph.street(sid);
        const double t = rng.uniform();
        const Vec2 a = graph.position(s.a);
        const Vec2 b = graph.position(s.b);
        const IntersectionId toward = rng.uniform_index(2) == 0 ? s.a : s.b;
        states.push_back({static_cast<VehicleId>(i), a + t * (b - a), draw_speed(opts, rng),
                          sid, toward, {}});
    }
    return states;
}

void step_synthetic(std::vector<VehicleState>& states, const StreetGraph& graph, double dt,
                    const MobilityOptions& opts, Rng& rng) {
    if (dt <= 0.0)
        throw std::invalid_argument("dt must be positive");
    for (VehicleState& v : states) {
        double remaining = v.speed * dt;
        while (remaining > 0.0) {
            const Vec2 goal = graph.position(v.heading_to);
            const double gap = distance(v.position, goal);
            if (remaining < gap) {
                const Vec2 dir = (1.0 / gap) * (goal - v.position);
                v.position = v.position + remaining * dir;
                break;
            }
            // Reached the intersection; carry the overshoot onto the next
            // street so the position stays on-graph.
            remaining -= gap;
            v.position = goal;
            const IntersectionId at = v.heading_to;
            StreetId next;
            if (!v.route.empty()) {
                const IntersectionId want = v.route.front();
                v.route.erase(v.route.begin());
                next = v.street;
                for (const AdjacencyEntry& e : graph.adjacent(at))
                    if (e.far == want) {
                        next = e.street;
                        break;
                    }
            } else {
                next = pick_next_street(graph, at, v.street, rng);
            }
            v.street = next;
            v.heading_to = other_endpoint(graph.street(next), at);
            v.speed = draw_speed(opts, rng);
            if (v.speed <= 0.0)
                break;
        }
    }
}

TracePlayback::TracePlayback(std::vector<TraceRecord> records) {
    std::map<VehicleId, std::vector<TraceRecord>> grouped;
    for (const TraceRecord& r : records) {
        auto& v = grouped[r.vehicle];
        if (!v.empty() && r.time <= v.back().time)
            throw std::invalid_argument("non-monotone trace time for vehicle " +
                                        std::to_string(r.vehicle));
        if (r.time < 0.0)
            throw std::invalid_argument("negative trace time for vehicle " +
                                        std::to_string(r.vehicle));
        v.push_back(r);
    }
    series_.assign(grouped.begin(), grouped.end());
}

std::vector<VehicleId> TracePlayback::vehicle_ids() const {
    std::vector<VehicleId> ids;
    ids.reserve(series_.size());
    for (const auto& [id, _] : series_)
        ids.push_back(id);
    return ids;
}

bool TracePlayback::has_vehicle(VehicleId id) const {
    return std::any_of(series_.begin(), series_.end(),
                       [id](const auto& s) { return s.first == id; });
}

TraceRecord TracePlayback::sample(VehicleId id, double t) const {
    const auto it = std::find_if(series_.begin(), series_.end(),
                                 [id](const auto& s) { return s.first == id; });
    if (it == series_.end())
        throw std::out_of_range("unknown vehicle " + std::to_string(id));
    const auto& recs = it->second;
    if (t <= recs.front().time)
        return {t, id, recs.front().position, recs.front().speed};
    if (t >= recs.back().time)
        return {t, id, recs.back().position, recs.back().speed};
    const auto hi = std::lower_bound(recs.begin(), recs.end(), t,
                                     [](const TraceRecord& r, double x) { return r.time < x; });
    const auto lo = hi - 1;
    const double w = (t - lo->time) / (hi->time - lo->time);
    return {t, id, lo->position + w * (hi->position - lo->position),
            lo->speed + w * (hi->speed - lo->speed)};
}

std::vector<VehicleState> TracePlayback::states_at(const StreetGraph& graph, double t,
                                                   double tol) const {
    std::vector<VehicleState> states;
    states.reserve(series_.size());
    for (const auto& [id, _] : series_) {
        const TraceRecord r = sample(id, t);
        const auto sid = locate_street(graph, r.position, tol);
        states.push_back({id, r.position, r.speed, sid.value_or(-1),
                          sid ? graph.street(*sid).a : -1, {}});
    }
    return states;
}

TracePlayback ingest_trace(std::istream& in) {
    std::vector<TraceRecord> records;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        if (!header_seen) {
            if (line != "time,vehicle,x,y,speed")
                throw std::invalid_argument("trace line 1: expected header time,vehicle,x,y,speed");
            header_seen = true;
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ','))
            fields.push_back(field);
        if (fields.size() != 5)
            throw std::invalid_argument("trace line " + std::to_string(lineno) +
                                        ": expected 5 comma-separated fields");
        try {
            records.push_back({std::stod(fields[0]),
                               static_cast<VehicleId>(std::stol(fields[1])),
                               {std::stod(fields[2]), std::stod(fields[3])},
                               std::stod(fields[4])});
        } catch (const std::exception&) {
            throw std::invalid_argument("trace line " + std::to_string(lineno) +
                                        ": malformed numeric field");
        }
    }
    return TracePlayback(std::move(records));
}

std::vector<long> count_vehicles_per_street(const std::vector<VehicleState>& states,
                                            const StreetGraph& graph, double tol) {
    std::vector<long> counts(graph.num_streets(), 0);
    for (const VehicleState& v : states) {
        if (const auto sid = locate_street(graph, v.position, tol))
            ++counts[static_cast<std::size_t>(*sid)];
    }
    return counts;
}

}  // namespace vanetsim
