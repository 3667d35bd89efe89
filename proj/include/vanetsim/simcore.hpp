#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "vanetsim/mobility.hpp"
#include "vanetsim/street_graph.hpp"

namespace vanetsim {

struct RadioConfig {
    double tx_range = 500.0;       // m
    double bitrate = 18e6;         // bit/s
    double processing_delay = 0.001;  // s per hop
    double intersection_zone = 15.0;  // D_int, m
    double street_tol = 1.0;       // m, on-street tolerance for the LOS rule
    bool obstacles = true;         // Manhattan line-of-sight when true
};

// Cached LOS geometry for one position: streets it lies on and intersections
// whose zone it is inside. Recomputed per mobility tick in the simulation.
struct LosSite {
    std::vector<StreetId> streets;
    std::vector<IntersectionId> zones;
};

LosSite los_site(const StreetGraph& graph, Vec2 p, const RadioConfig& cfg);

// Unit-disk reachability with a grid line-of-sight rule: in range, and
// either on a common street, in a common intersection zone, or one on a
// street incident to an intersection whose zone holds the other.
bool deliverable(Vec2 pa, Vec2 pb, const StreetGraph& graph, const RadioConfig& cfg);
bool deliverable(Vec2 pa, const LosSite& sa, Vec2 pb, const LosSite& sb,
                 const StreetGraph& graph, const RadioConfig& cfg);

// Serialization plus per-hop processing delay.
double hop_delay(long size_bytes, const RadioConfig& cfg);

enum class EventKind {
    kMobilityTick,
    kBeacon,
    kPacketArrival,
    kRetryTimeout,
    kLearningTick,
    kPacketOrigination,
};

struct Event {
    double time;
    std::uint64_t sequence;  // FIFO tie-break among equal times
    EventKind kind;
    std::int64_t payload = 0;  // packet id / pair id, kind-dependent
};

// Min-queue over (time, sequence); refuses events scheduled in the past.
class EventQueue {
  public:
    void schedule(double time, EventKind kind, std::int64_t payload = 0);
    std::optional<Event> pop_next();
    bool empty() const { return heap_.empty(); }
    double now() const { return now_; }

  private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            return a.time > b.time || (a.time == b.time && a.sequence > b.sequence);
        }
    };
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t next_sequence_ = 0;
    double now_ = 0.0;
};

struct NeighborEntry {
    Vec2 position;
    double beacon_time;
};

// Per-vehicle view of recently heard beacons. Entries expire after
// `expiry` seconds and are never returned stale.
class NeighborTable {
  public:
    void upsert(VehicleId neighbor, Vec2 position, double time) {
        entries_[neighbor] = {position, time};
    }
    void erase(VehicleId neighbor) { entries_.erase(neighbor); }

    std::vector<std::pair<VehicleId, NeighborEntry>> current(double now, double expiry) const {
        std::vector<std::pair<VehicleId, NeighborEntry>> out;
        for (const auto& [id, e] : entries_)
            if (now - e.beacon_time <= expiry)
                out.emplace_back(id, e);
        return out;
    }

  private:
    std::map<VehicleId, NeighborEntry> entries_;
};

// One beacon round: every vehicle's beacon reaches exactly the vehicles it
// is deliverable to; receivers stamp entries with `time`.
void emit_beacons(double time, const std::vector<VehicleState>& states,
                  const std::vector<LosSite>& sites, const StreetGraph& graph,
                  const RadioConfig& cfg, std::vector<NeighborTable>& tables);

// Omniscient oracle: true destination positions and per-street densities,
// optionally as of (now - staleness).
class LocationService {
  public:
    using PositionFn = std::function<Vec2(VehicleId, double)>;

    LocationService(const StreetGraph& graph, PositionFn positions, double tol)
        : graph_(graph), positions_(std::move(positions)), tol_(tol) {}

    Vec2 position_of(VehicleId id, double now, double staleness = 0.0) const {
        return positions_(id, now - staleness);
    }

    long vehicles_on_street(StreetId street, const std::vector<VehicleState>& states) const {
        return count_vehicles_per_street(states, graph_, tol_).at(
            static_cast<std::size_t>(street));
    }

  private:
    const StreetGraph& graph_;
    PositionFn positions_;
    double tol_;
};

}  // namespace vanetsim
