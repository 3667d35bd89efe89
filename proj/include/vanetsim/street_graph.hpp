#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vanetsim/geometry.hpp"

namespace vanetsim {

using IntersectionId = std::int32_t;
using StreetId = std::int32_t;

struct Intersection {
    IntersectionId id;
    Vec2 position;
};

struct Street {
    StreetId id;
    IntersectionId a;
    IntersectionId b;
    double length;
};

struct AdjacencyEntry {
    StreetId street;
    IntersectionId far;  // the endpoint on the other side
};

// Per-street nonnegative edge weights consumed by dijkstra(). Entries live
// in [0, r] where r is the street count (see street_cost()).
struct CostMatrix {
    std::vector<double> cost;

    double operator[](StreetId s) const { return cost.at(static_cast<std::size_t>(s)); }
    std::size_t size() const { return cost.size(); }

    static CostMatrix uniform(std::size_t streets, double value) {
        CostMatrix m;
        m.cost.assign(streets, value);
        return m;
    }
};

// Planar city map: intersections as vertices, straight streets as edges.
class StreetGraph {
  public:
    StreetGraph(std::vector<Intersection> intersections, std::vector<Street> streets);

    const std::vector<Intersection>& intersections() const { return intersections_; }
    const std::vector<Street>& streets() const { return streets_; }
    const std::vector<AdjacencyEntry>& adjacent(IntersectionId v) const {
        return adjacency_.at(static_cast<std::size_t>(v));
    }

    const Intersection& intersection(IntersectionId v) const {
        return intersections_.at(static_cast<std::size_t>(v));
    }
    const Street& street(StreetId s) const { return streets_.at(static_cast<std::size_t>(s)); }

    Vec2 position(IntersectionId v) const { return intersection(v).position; }
    Vec2 street_endpoint_a(StreetId s) const { return position(street(s).a); }
    Vec2 street_endpoint_b(StreetId s) const { return position(street(s).b); }

    std::size_t num_intersections() const { return intersections_.size(); }
    std::size_t num_streets() const { return streets_.size(); }

  private:
    std::vector<Intersection> intersections_;
    std::vector<Street> streets_;
    std::vector<std::vector<AdjacencyEntry>> adjacency_;
};

// cols x rows intersections at (i*dx, j*dy); axis-aligned streets between
// grid neighbors. Rejects the degenerate 1x1 case.
StreetGraph build_grid(int cols, int rows, double dx, double dy);

// Minimum-total-cost intersection sequence src..dst inclusive. Ties broken
// by fewer hops, then by smaller next-intersection id. Empty optional when
// dst is unreachable.
std::optional<std::vector<IntersectionId>> dijkstra(const StreetGraph& graph,
                                                    const CostMatrix& costs,
                                                    IntersectionId src, IntersectionId dst);

double path_cost(const StreetGraph& graph, const CostMatrix& costs,
                 const std::vector<IntersectionId>& path);

// Id minimizing Euclidean distance to p; ties to the smaller id.
IntersectionId nearest_intersection(const StreetGraph& graph, Vec2 p);

// Street whose segment lies within tol of p; ties to the smaller street id.
std::optional<StreetId> locate_street(const StreetGraph& graph, Vec2 p, double tol);

// All streets within tol of p (a point at an intersection lies on every
// incident street).
std::vector<StreetId> locate_streets(const StreetGraph& graph, Vec2 p, double tol);

}  // namespace vanetsim
