#include <doctest.h>

#include <set>

#include "vanetsim/protocols.hpp"

using namespace vanetsim;

namespace {

// Static node field with unit-disk connectivity (no obstacle rule): enough
// to exercise the forwarding decisions in isolation.
struct Field {
    std::vector<Vec2> pos;
    double range = 500.0;

    std::vector<Neighbor> neighbors_of(int i) const {
        std::vector<Neighbor> out;
        for (std::size_t j = 0; j < pos.size(); ++j)
            if (static_cast<int>(j) != i &&
                distance(pos[i], pos[static_cast<std::size_t>(j)]) <= range)
                out.push_back({static_cast<VehicleId>(j), pos[j]});
        return out;
    }
};

struct WalkResult {
    bool delivered = false;
    bool dropped = false;
    DropReason reason = DropReason::kNoPath;
    int hops = 0;
    std::vector<VehicleId> visited;
};

WalkResult walk_gpsr(const Field& f, VehicleId src, VehicleId dst, int ttl = 64) {
    Packet pkt;
    pkt.source = src;
    pkt.destination = dst;
    pkt.dest_snapshot = f.pos[static_cast<std::size_t>(dst)];
    pkt.ttl = ttl;
    RadioConfig cfg;
    cfg.tx_range = f.range;
    WalkResult r;
    VehicleId at = src;
    for (int step = 0; step < 10 * ttl; ++step) {
        r.visited.push_back(at);
        const auto d = gpsr_step(pkt, at, f.pos[static_cast<std::size_t>(at)],
                                 f.neighbors_of(at), cfg);
        if (d.outcome == ForwardingDecision::Outcome::kDeliver) {
            r.delivered = true;
            return r;
        }
        if (d.outcome == ForwardingDecision::Outcome::kDrop) {
            r.dropped = true;
            r.reason = d.reason;
            return r;
        }
        REQUIRE(d.outcome == ForwardingDecision::Outcome::kForward);
        pkt.prev_hop = at;
        pkt.prev_position = f.pos[static_cast<std::size_t>(at)];
        pkt.has_prev = true;
        ++pkt.hop_count;
        ++r.hops;
        at = d.next_hop;
    }
    FAIL("gpsr walk did not terminate");
    return r;
}

// Independent Gabriel check: w strictly inside the circle centered at the
// edge midpoint with radius half the edge length.
bool oracle_gabriel_keep(Vec2 u, Vec2 v, const std::vector<Vec2>& others) {
    const Vec2 m = 0.5 * (u + v);
    const double radius = 0.5 * distance(u, v);
    for (const Vec2& w : others)
        if (distance(w, m) < radius)
            return false;
    return true;
}

}  // namespace

TEST_CASE("greedy_next_hop") {
    SUBCASE("target is itself a neighbor") {
        const std::vector<Neighbor> nbrs{{1, {100.0, 0.0}}, {2, {50.0, 0.0}}};
        CHECK(greedy_next_hop({0, 0}, nbrs, {100.0, 0.0}) == 1);
    }
    SUBCASE("closest progress wins") {
        // self at 250 from target; neighbors at 300 and 200
        const std::vector<Neighbor> nbrs{{1, {0.0, 300.0}}, {2, {0.0, 200.0}}};
        CHECK(greedy_next_hop({0.0, 250.0}, nbrs, {0.0, 0.0}) == 2);
    }
    SUBCASE("local maximum when nobody is closer") {
        const std::vector<Neighbor> nbrs{{1, {0.0, 300.0}}, {2, {0.0, 260.0}}};
        CHECK(!greedy_next_hop({0.0, 250.0}, nbrs, {0.0, 0.0}).has_value());
    }
    SUBCASE("equal distance is not progress") {
        const std::vector<Neighbor> nbrs{{1, {0.0, -250.0}}};
        CHECK(!greedy_next_hop({0.0, 250.0}, nbrs, {0.0, 0.0}).has_value());
    }
}

TEST_CASE("planarize_gabriel") {
    SUBCASE("two nodes keep their edge") {
        const std::vector<Neighbor> nbrs{{1, {100.0, 0.0}}};
        CHECK(planarize_gabriel({0, 0}, nbrs).size() == 1);
    }
    SUBCASE("midpoint witness removes the edge") {
        const std::vector<Neighbor> nbrs{{1, {100.0, 0.0}}, {2, {50.0, 0.0}}};
        const auto planar = planarize_gabriel({0, 0}, nbrs);
        REQUIRE(planar.size() == 1);
        CHECK(planar[0].id == 2);
    }
    SUBCASE("matches the exhaustive oracle on random 10-node sets") {
        Rng rng(31);
        for (int trial = 0; trial < 100; ++trial) {
            const Vec2 self{rng.uniform(0.0, 1000.0), rng.uniform(0.0, 1000.0)};
            std::vector<Neighbor> nbrs;
            for (int i = 0; i < 10; ++i)
                nbrs.push_back({i, {rng.uniform(0.0, 1000.0), rng.uniform(0.0, 1000.0)}});
            const auto planar = planarize_gabriel(self, nbrs);
            std::set<VehicleId> kept;
            for (const auto& n : planar)
                kept.insert(n.id);
            for (const auto& v : nbrs) {
                std::vector<Vec2> others;
                for (const auto& w : nbrs)
                    if (w.id != v.id)
                        others.push_back(w.position);
                CHECK(kept.count(v.id) ==
                      (oracle_gabriel_keep(self, v.position, others) ? 1U : 0U));
            }
        }
    }
}

TEST_CASE("gpsr delivers along a collinear chain") {
    Field f;
    f.range = 500.0;
    f.pos = {{0.0, 0.0}, {400.0, 0.0}, {800.0, 0.0}};
    const WalkResult r = walk_gpsr(f, 0, 2);
    CHECK(r.delivered);
    CHECK(r.hops == 2);
}

TEST_CASE("gpsr recovers around a void via perimeter mode") {
    Field f;
    f.range = 120.0;
    f.pos = {
        {0.0, 0.0},      // 0: source (local maximum toward the target)
        {0.0, 100.0},    // 1
        {0.0, 200.0},    // 2
        {100.0, 200.0},  // 3
        {200.0, 200.0},  // 4
        {300.0, 200.0},  // 5
        {300.0, 100.0},  // 6
        {300.0, 0.0},    // 7: destination
    };
    // greedy alone is stuck at the source
    CHECK(!greedy_next_hop(f.pos[0], f.neighbors_of(0), f.pos[7]).has_value());
    const WalkResult r = walk_gpsr(f, 0, 7);
    CHECK(r.delivered);
    CHECK(r.hops <= 7);
}

TEST_CASE("gpsr drops unreachable destinations after touring the face") {
    Field f;
    f.range = 120.0;
    f.pos = {{0.0, 0.0}, {0.0, 100.0}, {1000.0, 1000.0}};
    const WalkResult r = walk_gpsr(f, 0, 2);
    CHECK(r.dropped);
    CHECK(r.reason == DropReason::kNoPath);
}

TEST_CASE("gpsr drops on ttl") {
    Field f;
    f.range = 500.0;
    f.pos = {{0.0, 0.0}, {400.0, 0.0}, {800.0, 0.0}};
    Packet pkt;
    pkt.destination = 2;
    pkt.dest_snapshot = f.pos[2];
    pkt.ttl = 5;
    pkt.hop_count = 5;
    RadioConfig cfg;
    const auto d = gpsr_step(pkt, 0, f.pos[0], f.neighbors_of(0), cfg);
    CHECK(d.outcome == ForwardingDecision::Outcome::kDrop);
    CHECK(d.reason == DropReason::kTtlExceeded);
}

TEST_CASE("gpcr prefers the coordinator over progress across the junction") {
    const StreetGraph g = build_grid(2, 2, 400.0, 400.0);
    RadioConfig cfg;  // D_int = 15
    Packet pkt;
    pkt.destination = 99;
    pkt.dest_snapshot = {400.0, 400.0};
    // self mid-street toward junction 1 at (400, 0); the neighbor at
    // (400, 200) is past the junction with more progress, (395, 0) is a
    // coordinator
    const std::vector<Neighbor> nbrs{{5, {400.0, 200.0}}, {6, {395.0, 0.0}}};
    const auto d = gpcr_step(pkt, 0, {100.0, 0.0}, nbrs, g, cfg);
    REQUIRE(d.outcome == ForwardingDecision::Outcome::kForward);
    CHECK(d.next_hop == 6);
}

TEST_CASE("gpcr matches plain greedy on a straight street") {
    const StreetGraph g = build_grid(2, 2, 400.0, 400.0);
    RadioConfig cfg;
    Packet pkt;
    pkt.destination = 99;
    pkt.dest_snapshot = {350.0, 0.0};
    const std::vector<Neighbor> nbrs{{5, {180.0, 0.0}}, {6, {250.0, 0.0}}};
    const auto d = gpcr_step(pkt, 0, {100.0, 0.0}, nbrs, g, cfg);
    REQUIRE(d.outcome == ForwardingDecision::Outcome::kForward);
    CHECK(d.next_hop == *greedy_next_hop({100.0, 0.0}, nbrs, pkt.dest_snapshot));
}

TEST_CASE("gpcr right-hand repair at a junction with an empty best street") {
    const StreetGraph g = build_grid(3, 3, 400.0, 400.0);
    RadioConfig cfg;
    Packet pkt;
    pkt.destination = 99;
    pkt.dest_snapshot = {1200.0, 400.0};  // due east of the center junction
    // self is the coordinator at the center (400, 400); the east street is
    // empty; south and north streets hold one neighbor each — clockwise
    // from east reaches south first
    const std::vector<Neighbor> nbrs{{5, {400.0, 600.0}}, {6, {400.0, 200.0}}};
    const auto d = gpcr_step(pkt, 0, {400.0, 400.0}, nbrs, g, cfg);
    REQUIRE(d.outcome == ForwardingDecision::Outcome::kForward);
    CHECK(d.next_hop == 6);
}

TEST_CASE("gpcr buffers when the street ahead is empty") {
    const StreetGraph g = build_grid(2, 2, 400.0, 400.0);
    RadioConfig cfg;
    Packet pkt;
    pkt.destination = 99;
    pkt.dest_snapshot = {400.0, 400.0};
    const std::vector<Neighbor> nbrs{{5, {20.0, 0.0}}};  // only backwards
    const auto d = gpcr_step(pkt, 0, {200.0, 0.0}, nbrs, g, cfg);
    CHECK(d.outcome == ForwardingDecision::Outcome::kBuffer);
}

TEST_CASE("pbla_originate") {
    const StreetGraph g = build_grid(3, 6, 1000.0, 500.0);
    const CostMatrix ones = CostMatrix::uniform(g.num_streets(), 1.0);
    SUBCASE("same street means pure greedy") {
        Packet pkt;
        pbla_originate(pkt, {100.0, 0.0}, g, ones, {900.0, 0.0});
        CHECK(pkt.anchors.empty());
        Packet pkt2;
        pbla_originate(pkt2, {100.0, 0.0}, g, ones, {300.0, 0.0});
        CHECK(pkt2.anchors.empty());
    }
    SUBCASE("uniform costs give the hop-shortest anchor path") {
        Packet pkt;
        pbla_originate(pkt, {10.0, 0.0}, g, ones, {1990.0, 2500.0});
        CHECK(pkt.anchors ==
              std::vector<IntersectionId>{0, 1, 2, 5, 8, 11, 14, 17});
    }
    SUBCASE("learned-cheap corridor beats the geometric shortcut") {
        const StreetGraph small = build_grid(2, 2, 100.0, 100.0);
        // streets: 0:(0-1) 1:(0-2) 2:(1-3) 3:(2-3)
        CostMatrix costs = CostMatrix::uniform(4, 4.0);
        costs.cost[1] = 1.0;
        costs.cost[3] = 1.0;
        Packet pkt;
        pbla_originate(pkt, {1.0, 0.0}, small, costs, {99.0, 99.0});
        CHECK(pkt.anchors == std::vector<IntersectionId>{0, 2, 3});
    }
}

TEST_CASE("pbla_step advances anchors inside the intersection zone") {
    const StreetGraph g = build_grid(3, 6, 1000.0, 500.0);
    RadioConfig cfg;
    Packet pkt;
    pkt.destination = 99;
    pkt.anchors = {0, 1, 2};
    pkt.next_anchor = 1;
    pkt.dest_snapshot = {2000.0, 0.0};
    const Vec2 self = {990.0, 0.0};  // 10 m from anchor 1 at (1000, 0)
    const std::vector<Neighbor> nbrs{{5, {1400.0, 0.0}}};
    const auto d = pbla_step(pkt, 0, self, nbrs, g, [&] { return pkt.dest_snapshot; }, cfg);
    CHECK(pkt.next_anchor == 2);
    REQUIRE(d.outcome == ForwardingDecision::Outcome::kForward);
    CHECK(d.next_hop == 5);  // greedy retargeted at anchor 2 (2000, 0)
}

TEST_CASE("pbla_step buffers at a local maximum and never regresses anchors") {
    const StreetGraph g = build_grid(3, 6, 1000.0, 500.0);
    RadioConfig cfg;
    Packet pkt;
    pkt.destination = 99;
    pkt.anchors = {0, 1, 2};
    pkt.next_anchor = 1;
    pkt.dest_snapshot = {2000.0, 0.0};
    const auto d = pbla_step(pkt, 0, {500.0, 0.0}, {}, g,
                             [&] { return pkt.dest_snapshot; }, cfg);
    CHECK(d.outcome == ForwardingDecision::Outcome::kBuffer);
    CHECK(pkt.next_anchor == 1);

    // anchor index is monotone under arbitrary further steps
    Rng rng(9);
    std::size_t last = pkt.next_anchor;
    for (int step = 0; step < 200; ++step) {
        const Vec2 self{rng.uniform(0.0, 2000.0), rng.uniform(0.0, 2500.0)};
        std::vector<Neighbor> nbrs;
        if (rng.uniform() < 0.7)
            nbrs.push_back({7, {rng.uniform(0.0, 2000.0), rng.uniform(0.0, 2500.0)}});
        (void)pbla_step(pkt, 0, self, nbrs, g, [&] { return pkt.dest_snapshot; }, cfg);
        CHECK(pkt.next_anchor >= last);
        last = pkt.next_anchor;
    }
}

TEST_CASE("pbla delivers over a dense anchor chain") {
    const StreetGraph g = build_grid(3, 6, 1000.0, 500.0);
    RadioConfig cfg;
    cfg.obstacles = false;
    Field f;
    f.range = 500.0;
    // relay nodes every 250 m along the south edge plus the corner column
    for (double x = 0.0; x <= 2000.0; x += 250.0)
        f.pos.push_back({x, 0.0});
    const VehicleId dst = static_cast<VehicleId>(f.pos.size() - 1);
    Packet pkt;
    pkt.destination = dst;
    const CostMatrix ones = CostMatrix::uniform(g.num_streets(), 1.0);
    pbla_originate(pkt, f.pos[0], g, ones, f.pos[static_cast<std::size_t>(dst)]);
    CHECK(pkt.anchors == std::vector<IntersectionId>{0, 1, 2});

    VehicleId at = 0;
    int hops = 0;
    while (hops < 20) {
        const auto d = pbla_step(pkt, at, f.pos[static_cast<std::size_t>(at)],
                                 f.neighbors_of(at), g,
                                 [&] { return f.pos[static_cast<std::size_t>(dst)]; }, cfg);
        if (d.outcome == ForwardingDecision::Outcome::kDeliver)
            break;
        REQUIRE(d.outcome == ForwardingDecision::Outcome::kForward);
        ++pkt.hop_count;
        ++hops;
        at = d.next_hop;
    }
    CHECK(at == dst);
    CHECK(hops <= 6);
}

TEST_CASE("protocol names parse both ways") {
    CHECK(parse_protocol("gpsr") == Protocol::kGpsr);
    CHECK(parse_protocol("gpcr") == Protocol::kGpcr);
    CHECK(parse_protocol("pbla") == Protocol::kPbla);
    CHECK(!parse_protocol("aodv").has_value());
    for (Protocol p : {Protocol::kGpsr, Protocol::kGpcr, Protocol::kPbla})
        CHECK(parse_protocol(protocol_name(p)) == p);
}
