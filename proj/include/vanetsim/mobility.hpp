#pragma once

#include <cstdint>
#include <istream>
#include <vector>

#include "vanetsim/rng.hpp"
#include "vanetsim/street_graph.hpp"

namespace vanetsim {

using VehicleId = std::int32_t;

struct VehicleState {
    VehicleId id;
    Vec2 position;
    double speed;               // m/s
    StreetId street;            // street the vehicle currently travels on
    IntersectionId heading_to;  // endpoint of `street` the vehicle moves toward
    std::vector<IntersectionId> route;  // pending intersections, front consumed first
};

struct MobilityOptions {
    double v_min = 8.0;   // m/s
    double v_max = 14.0;  // m/s
    double dt = 0.5;      // s
};

// Vehicles placed uniformly along random streets, random initial heading.
std::vector<VehicleState> place_random(const StreetGraph& graph, int count,
                                       const MobilityOptions& opts, Rng& rng);

// Advance every vehicle by speed*dt along its street; at an intersection
// consume the route, or pick a uniformly random incident street avoiding an
// immediate U-turn (dead-ends exempt); speed redrawn per street.
void step_synthetic(std::vector<VehicleState>& states, const StreetGraph& graph, double dt,
                    const MobilityOptions& opts, Rng& rng);

struct TraceRecord {
    double time;
    VehicleId vehicle;
    Vec2 position;
    double speed;
};

// Sampled positions per vehicle; exact at sample times, linear in between,
// clamped to the first/last sample outside the recorded span.
class TracePlayback {
  public:
    explicit TracePlayback(std::vector<TraceRecord> records);

    std::vector<VehicleId> vehicle_ids() const;
    bool has_vehicle(VehicleId id) const;
    TraceRecord sample(VehicleId id, double t) const;
    std::vector<VehicleState> states_at(const StreetGraph& graph, double t, double tol) const;

  private:
    // per-vehicle series sorted by time
    std::vector<std::pair<VehicleId, std::vector<TraceRecord>>> series_;
};

// CSV format: header `time,vehicle,x,y,speed`, LF line endings, `#` comments.
TracePlayback ingest_trace(std::istream& in);

// Per-street vehicle counts via locate_street; off-graph vehicles counted
// nowhere.
std::vector<long> count_vehicles_per_street(const std::vector<VehicleState>& states,
                                            const StreetGraph& graph, double tol);

}  // namespace vanetsim
