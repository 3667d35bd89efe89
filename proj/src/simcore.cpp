#include "vanetsim/simcore.hpp"

#include <algorithm>
#include <stdexcept>

namespace vanetsim {

LosSite los_site(const StreetGraph& graph, Vec2 p, const RadioConfig& cfg) {
    LosSite site;
    site.streets = locate_streets(graph, p, cfg.street_tol);
    for (const Intersection& v : graph.intersections())
        if (distance(p, v.position) <= cfg.intersection_zone)
            site.zones.push_back(v.id);
    return site;
}

namespace {

bool shares(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
    for (std::int32_t s : a)
        if (std::find(b.begin(), b.end(), s) != b.end())
            return true;
    return false;
}

bool street_touches_zone(const StreetGraph& graph, const std::vector<StreetId>& streets,
                         const std::vector<IntersectionId>& zones) {
    for (StreetId s : streets) {
        const Street& st = graph.street(s);
        for (IntersectionId z : zones)
            if (st.a == z || st.b == z)
                return true;
    }
    return false;
}

}  // namespace

bool deliverable(Vec2 pa, const LosSite& sa, Vec2 pb, const LosSite& sb,
                 const StreetGraph& graph, const RadioConfig& cfg) {
    if (distance(pa, pb) > cfg.tx_range)
        return false;
    if (!cfg.obstacles)
        return true;
    if (shares(sa.streets, sb.streets))
        return true;
    if (shares(sa.zones, sb.zones))
        return true;
    return street_touches_zone(graph, sa.streets, sb.zones) ||
           street_touches_zone(graph, sb.streets, sa.zones);
}

bool deliverable(Vec2 pa, Vec2 pb, const StreetGraph& graph, const RadioConfig& cfg) {
    return deliverable(pa, los_site(graph, pa, cfg), pb, los_site(graph, pb, cfg), graph, cfg);
}

double hop_delay(long size_bytes, const RadioConfig& cfg) {
    if (size_bytes <= 0)
        throw std::invalid_argument("packet size must be positive");
    return 8.0 * static_cast<double>(size_bytes) / cfg.bitrate + cfg.processing_delay;
}

void EventQueue::schedule(double time, EventKind kind, std::int64_t payload) {
    if (time < now_)
        throw std::logic_error("event scheduled in the past");
    heap_.push({time, next_sequence_++, kind, payload});
}

std::optional<Event> EventQueue::pop_next() {
    if (heap_.empty())
        return std::nullopt;
    Event e = heap_.top();
    heap_.pop();
    now_ = e.time;
    return e;
}

void emit_beacons(double time, const std::vector<VehicleState>& states,
                  const std::vector<LosSite>& sites, const StreetGraph& graph,
                  const RadioConfig& cfg, std::vector<NeighborTable>& tables) {
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = i + 1; j < states.size(); ++j) {
            if (deliverable(states[i].position, sites[i], states[j].position, sites[j], graph,
                            cfg)) {
                tables[j].upsert(states[i].id, states[i].position, time);
                tables[i].upsert(states[j].id, states[j].position, time);
            }
        }
    }
}

}  // namespace vanetsim
