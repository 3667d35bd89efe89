#include "vanetsim/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vanetsim {

std::optional<Protocol> parse_protocol(const std::string& name) {
    if (name == "gpsr")
        return Protocol::kGpsr;
    if (name == "gpcr")
        return Protocol::kGpcr;
    if (name == "pbla")
        return Protocol::kPbla;
    return std::nullopt;
}

std::string protocol_name(Protocol p) {
    switch (p) {
        case Protocol::kGpsr: return "gpsr";
        case Protocol::kGpcr: return "gpcr";
        case Protocol::kPbla: return "pbla";
    }
    return "?";
}

std::string drop_reason_name(DropReason r) {
    switch (r) {
        case DropReason::kTtlExceeded: return "ttl-exceeded";
        case DropReason::kRetryTimeout: return "retry-timeout";
        case DropReason::kNoPath: return "no-path";
    }
    return "?";
}

std::optional<VehicleId> greedy_next_hop(Vec2 self, const std::vector<Neighbor>& neighbors,
                                         Vec2 target) {
    const double own = distance(self, target);
    std::optional<VehicleId> best;
    double best_d = own;
    for (const Neighbor& n : neighbors) {
        const double d = distance(n.position, target);
        if (d < best_d || (d == best_d && best && n.id < *best)) {
            best_d = d;
            best = n.id;
        }
    }
    return best;
}

std::vector<Neighbor> planarize_gabriel(Vec2 self, const std::vector<Neighbor>& neighbors) {
    std::vector<Neighbor> kept;
    for (const Neighbor& v : neighbors) {
        bool witness = false;
        for (const Neighbor& w : neighbors) {
            if (w.id == v.id)
                continue;
            // strictly inside the circle with diameter (self, v)
            if (dot(self - w.position, v.position - w.position) < 0.0) {
                witness = true;
                break;
            }
        }
        if (!witness)
            kept.push_back(v);
    }
    return kept;
}

namespace {

constexpr double kFaceEps = 1e-9;

double angle_of(Vec2 from, Vec2 to) { return std::atan2(to.y - from.y, to.x - from.x); }

// Counterclockwise offset of `a` past `ref`, in (0, 2*pi].
double ccw_from(double ref, double a) {
    double d = a - ref;
    const double two_pi = 2.0 * std::acos(-1.0);
    while (d <= 0.0)
        d += two_pi;
    while (d > two_pi)
        d -= two_pi;
    return d;
}

// Right-hand-rule forwarding over the Gabriel-planarized neighbor set.
// Candidates are scanned counterclockwise from the in-edge (or from the
// target direction on perimeter entry). An edge crossing the entry-target
// line closer to the target switches faces; re-traversing the face's first
// directed edge means the face has been toured and the target is
// unreachable.
ForwardingDecision perimeter_forward(Packet& pkt, VehicleId self_id, Vec2 self_pos,
                                     const std::vector<Neighbor>& planar, Vec2 target) {
    if (planar.empty())
        return ForwardingDecision::drop(DropReason::kNoPath);
    PerimeterState& ps = *pkt.perimeter;

    const double ref = pkt.has_prev ? angle_of(self_pos, pkt.prev_position)
                                    : angle_of(self_pos, target);
    std::vector<Neighbor> order = planar;
    std::sort(order.begin(), order.end(), [&](const Neighbor& l, const Neighbor& r) {
        const double dl = ccw_from(ref, angle_of(self_pos, l.position));
        const double dr = ccw_from(ref, angle_of(self_pos, r.position));
        return dl != dr ? dl < dr : l.id < r.id;
    });

    for (const Neighbor& n : order) {
        if (const auto x = segment_intersection(self_pos, n.position, ps.entry, target)) {
            const double d = distance(*x, target);
            if (d < ps.face_dist - kFaceEps) {
                ps.face_dist = d;
                ps.has_first_edge = false;  // new face begins
                continue;
            }
        }
        if (ps.has_first_edge && ps.first_from == self_id && ps.first_to == n.id)
            return ForwardingDecision::drop(DropReason::kNoPath);
        if (!ps.has_first_edge) {
            ps.has_first_edge = true;
            ps.first_from = self_id;
            ps.first_to = n.id;
        }
        return ForwardingDecision::forward(n.id);
    }
    return ForwardingDecision::drop(DropReason::kNoPath);
}

std::optional<Neighbor> find_neighbor(const std::vector<Neighbor>& neighbors, VehicleId id) {
    for (const Neighbor& n : neighbors)
        if (n.id == id)
            return n;
    return std::nullopt;
}

}  // namespace

ForwardingDecision gpsr_step(Packet& pkt, VehicleId self_id, Vec2 self_pos,
                             const std::vector<Neighbor>& neighbors, const RadioConfig& cfg) {
    (void)cfg;
    if (self_id == pkt.destination)
        return ForwardingDecision::deliver();
    if (pkt.hop_count >= pkt.ttl)
        return ForwardingDecision::drop(DropReason::kTtlExceeded);
    const Vec2 target = pkt.dest_snapshot;

    if (pkt.mode == ForwardMode::kPerimeter) {
        if (distance(self_pos, target) < distance(pkt.perimeter->entry, target)) {
            pkt.mode = ForwardMode::kGreedy;
            pkt.perimeter.reset();
        }
    }
    if (pkt.mode == ForwardMode::kGreedy) {
        if (const auto n = greedy_next_hop(self_pos, neighbors, target))
            return ForwardingDecision::forward(*n);
        // local maximum: enter perimeter mode here
        pkt.mode = ForwardMode::kPerimeter;
        pkt.perimeter = PerimeterState{self_pos, distance(self_pos, target)};
        pkt.has_prev = false;  // first perimeter hop orients on the target line
    }
    return perimeter_forward(pkt, self_id, self_pos, planarize_gabriel(self_pos, neighbors),
                             target);
}

namespace {

// Intersection whose zone contains p, if any (nearest wins).
std::optional<IntersectionId> coordinator_at(const StreetGraph& graph, Vec2 p,
                                             const RadioConfig& cfg) {
    std::optional<IntersectionId> best;
    double best_d = cfg.intersection_zone;
    for (const Intersection& v : graph.intersections()) {
        const double d = distance(p, v.position);
        if (d <= best_d) {
            best_d = d;
            best = v.id;
        }
    }
    return best;
}

bool on_street(const StreetGraph& graph, StreetId s, Vec2 p, double tol) {
    return point_segment_distance(p, graph.street_endpoint_a(s), graph.street_endpoint_b(s)) <=
           tol;
}

// Streets incident to `junction` ordered clockwise starting from
// `preferred`; used for the right-hand street repair.
std::vector<StreetId> clockwise_streets(const StreetGraph& graph, IntersectionId junction,
                                        StreetId preferred) {
    const Vec2 c = graph.position(junction);
    const auto dir_angle = [&](StreetId s) {
        const Street& st = graph.street(s);
        const IntersectionId far = st.a == junction ? st.b : st.a;
        return angle_of(c, graph.position(far));
    };
    const double ref = dir_angle(preferred);
    std::vector<StreetId> order;
    for (const AdjacencyEntry& e : graph.adjacent(junction))
        order.push_back(e.street);
    std::sort(order.begin(), order.end(), [&](StreetId l, StreetId r) {
        if (l == preferred)
            return true;
        if (r == preferred)
            return false;
        const double two_pi = 2.0 * std::acos(-1.0);
        const double dl = two_pi - ccw_from(ref, dir_angle(l));
        const double dr = two_pi - ccw_from(ref, dir_angle(r));
        return dl != dr ? dl < dr : l < r;
    });
    return order;
}

}  // namespace

ForwardingDecision gpcr_step(Packet& pkt, VehicleId self_id, Vec2 self_pos,
                             const std::vector<Neighbor>& neighbors, const StreetGraph& graph,
                             const RadioConfig& cfg) {
    if (self_id == pkt.destination)
        return ForwardingDecision::deliver();
    if (pkt.hop_count >= pkt.ttl)
        return ForwardingDecision::drop(DropReason::kTtlExceeded);
    const Vec2 target = pkt.dest_snapshot;

    // Direct handoff once the destination itself is audible.
    if (find_neighbor(neighbors, pkt.destination))
        return ForwardingDecision::forward(pkt.destination);

    const auto self_junction = coordinator_at(graph, self_pos, cfg);
    if (self_junction) {
        // At a coordinator: pick the incident street whose far end makes the
        // most progress, falling back clockwise (right-hand street repair).
        const Vec2 c = graph.position(*self_junction);
        StreetId preferred = -1;
        double best = std::numeric_limits<double>::infinity();
        for (const AdjacencyEntry& e : graph.adjacent(*self_junction)) {
            const double d = distance(graph.position(e.far), target);
            if (d < best) {
                best = d;
                preferred = e.street;
            }
        }
        for (StreetId s : clockwise_streets(graph, *self_junction, preferred)) {
            // farthest neighbor down this street, junction excluded
            std::optional<Neighbor> pick;
            double progress = cfg.intersection_zone;  // must leave the zone
            for (const Neighbor& n : neighbors) {
                if (!on_street(graph, s, n.position, cfg.street_tol))
                    continue;
                const double d = distance(n.position, c);
                if (d > progress || (pick && d == progress && n.id < pick->id)) {
                    progress = d;
                    pick = n;
                }
            }
            if (pick)
                return ForwardingDecision::forward(pick->id);
        }
        return ForwardingDecision::buffer();
    }

    // Mid-street: restricted greedy toward the junction that reduces the
    // remaining distance; never hop across it.
    const auto sid = locate_street(graph, self_pos, cfg.street_tol);
    if (!sid) {
        if (const auto n = greedy_next_hop(self_pos, neighbors, target))
            return ForwardingDecision::forward(*n);
        return ForwardingDecision::buffer();
    }
    const Street& st = graph.street(*sid);
    const IntersectionId junction =
        distance(graph.position(st.a), target) <= distance(graph.position(st.b), target) ? st.a
                                                                                         : st.b;
    const Vec2 jpos = graph.position(junction);

    // A coordinator at the forward junction takes precedence over any
    // non-coordinator, even one with more geometric progress.
    std::optional<Neighbor> coord;
    for (const Neighbor& n : neighbors) {
        if (distance(n.position, jpos) <= cfg.intersection_zone) {
            if (!coord || distance(n.position, jpos) < distance(coord->position, jpos) ||
                (distance(n.position, jpos) == distance(coord->position, jpos) &&
                 n.id < coord->id))
                coord = n;
        }
    }
    if (coord)
        return ForwardingDecision::forward(coord->id);

    std::optional<Neighbor> ahead;
    const double own_gap = distance(self_pos, jpos);
    for (const Neighbor& n : neighbors) {
        if (!on_street(graph, *sid, n.position, cfg.street_tol))
            continue;
        const double gap = distance(n.position, jpos);
        if (gap >= own_gap)
            continue;
        if (!ahead || gap < distance(ahead->position, jpos) ||
            (gap == distance(ahead->position, jpos) && n.id < ahead->id))
            ahead = n;
    }
    if (ahead)
        return ForwardingDecision::forward(ahead->id);
    return ForwardingDecision::buffer();
}

void pbla_originate(Packet& pkt, Vec2 source_pos, const StreetGraph& graph,
                    const CostMatrix& costs, Vec2 dest_pos) {
    pkt.dest_snapshot = dest_pos;
    pkt.anchors.clear();
    pkt.next_anchor = 0;
    const IntersectionId src_i = nearest_intersection(graph, source_pos);
    const IntersectionId dst_i = nearest_intersection(graph, dest_pos);
    if (src_i == dst_i)
        return;
    for (const AdjacencyEntry& e : graph.adjacent(src_i))
        if (e.far == dst_i)
            return;  // same street: pure greedy
    const auto path = dijkstra(graph, costs, src_i, dst_i);
    if (!path)
        throw std::runtime_error("no anchor path between intersections");
    pkt.anchors = *path;
}

ForwardingDecision pbla_step(Packet& pkt, VehicleId self_id, Vec2 self_pos,
                             const std::vector<Neighbor>& neighbors, const StreetGraph& graph,
                             const std::function<Vec2()>& refresh_destination,
                             const RadioConfig& cfg) {
    if (self_id == pkt.destination)
        return ForwardingDecision::deliver();
    if (pkt.hop_count >= pkt.ttl)
        return ForwardingDecision::drop(DropReason::kTtlExceeded);

    while (pkt.next_anchor < pkt.anchors.size() &&
           distance(self_pos, graph.position(pkt.anchors[pkt.next_anchor])) <=
               cfg.intersection_zone) {
        ++pkt.next_anchor;
        pkt.dest_snapshot = refresh_destination();
    }

    if (find_neighbor(neighbors, pkt.destination))
        return ForwardingDecision::forward(pkt.destination);

    const Vec2 target = pkt.next_anchor < pkt.anchors.size()
                            ? graph.position(pkt.anchors[pkt.next_anchor])
                            : pkt.dest_snapshot;
    if (const auto n = greedy_next_hop(self_pos, neighbors, target))
        return ForwardingDecision::forward(*n);
    return ForwardingDecision::buffer();
}

}  // namespace vanetsim
