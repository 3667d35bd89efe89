#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vanetsim/simcore.hpp"
#include "vanetsim/street_graph.hpp"

namespace vanetsim {

enum class Protocol { kGpsr, kGpcr, kPbla };

std::optional<Protocol> parse_protocol(const std::string& name);
std::string protocol_name(Protocol p);

enum class ForwardMode { kGreedy, kPerimeter };

enum class DropReason { kTtlExceeded, kRetryTimeout, kNoPath };

std::string drop_reason_name(DropReason r);

struct Neighbor {
    VehicleId id;
    Vec2 position;
};

struct PacketEvent {
    double time;
    VehicleId node;
    std::string what;
};

// Face-routing bookkeeping carried by a GPSR packet in perimeter mode.
struct PerimeterState {
    Vec2 entry;        // position where greedy failed (Lp)
    double face_dist;  // distance from the latest Lp-target crossing to target
    bool has_first_edge = false;
    VehicleId first_from = -1;
    VehicleId first_to = -1;
};

struct Packet {
    std::int64_t id = 0;
    VehicleId source = -1;
    VehicleId destination = -1;
    Vec2 dest_snapshot{};
    long size_bytes = 512;
    Protocol protocol = Protocol::kGpsr;
    ForwardMode mode = ForwardMode::kGreedy;
    std::vector<IntersectionId> anchors;
    std::size_t next_anchor = 0;
    std::optional<PerimeterState> perimeter;
    int hop_count = 0;
    int ttl = 64;
    VehicleId prev_hop = -1;
    Vec2 prev_position{};
    bool has_prev = false;
    std::vector<PacketEvent> trace;
};

struct ForwardingDecision {
    enum class Outcome { kForward, kBuffer, kDeliver, kDrop };
    Outcome outcome;
    VehicleId next_hop = -1;
    DropReason reason = DropReason::kNoPath;

    static ForwardingDecision forward(VehicleId n) { return {Outcome::kForward, n}; }
    static ForwardingDecision buffer() { return {Outcome::kBuffer}; }
    static ForwardingDecision deliver() { return {Outcome::kDeliver}; }
    static ForwardingDecision drop(DropReason r) { return {Outcome::kDrop, -1, r}; }
};

// Neighbor strictly minimizing distance to target, only when it beats the
// sender's own distance; ties to the smaller id; nullopt = local maximum.
std::optional<VehicleId> greedy_next_hop(Vec2 self, const std::vector<Neighbor>& neighbors,
                                         Vec2 target);

// Gabriel planarization of the local neighbor set: edge (self, v) survives
// iff no other neighbor lies strictly inside the circle with diameter
// (self, v).
std::vector<Neighbor> planarize_gabriel(Vec2 self, const std::vector<Neighbor>& neighbors);

ForwardingDecision gpsr_step(Packet& pkt, VehicleId self_id, Vec2 self_pos,
                             const std::vector<Neighbor>& neighbors, const RadioConfig& cfg);

ForwardingDecision gpcr_step(Packet& pkt, VehicleId self_id, Vec2 self_pos,
                             const std::vector<Neighbor>& neighbors, const StreetGraph& graph,
                             const RadioConfig& cfg);

// Computes the packet's anchor list from learned costs: the cheapest
// intersection path between the intersections nearest to source and
// destination. Same street (or same intersection) means pure greedy.
void pbla_originate(Packet& pkt, Vec2 source_pos, const StreetGraph& graph,
                    const CostMatrix& costs, Vec2 dest_pos);

// `refresh_destination` is consulted whenever an anchor is reached.
ForwardingDecision pbla_step(Packet& pkt, VehicleId self_id, Vec2 self_pos,
                             const std::vector<Neighbor>& neighbors, const StreetGraph& graph,
                             const std::function<Vec2()>& refresh_destination,
                             const RadioConfig& cfg);

}  // namespace vanetsim
