#include "vanetsim/street_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

namespace vanetsim {

namespace {
constexpr double kLengthTol = 1e-6;
}

StreetGraph::StreetGraph(std::vector<Intersection> intersections, std::vector<Street> streets)
    : intersections_(std::move(intersections)), streets_(std::move(streets)) {
    const auto v = static_cast<IntersectionId>(intersections_.size());
    for (std::size_t i = 0; i < intersections_.size(); ++i) {
        if (intersections_[i].id != static_cast<IntersectionId>(i))
            throw std::invalid_argument("intersection ids must be dense 0..V-1");
    }
    adjacency_.assign(intersections_.size(), {});
    for (std::size_t i = 0; i < streets_.size(); ++i) {
        const Street& s = streets_[i];
        if (s.id != static_cast<StreetId>(i))
            throw std::invalid_argument("street ids must be dense 0..E-1");
        if (s.a == s.b)
            throw std::invalid_argument("street endpoints must be distinct");
        if (s.a < 0 || s.a >= v || s.b < 0 || s.b >= v)
            throw std::invalid_argument("street endpoint out of range");
        const double geom = distance(position(s.a), position(s.b));
        if (s.length <= 0.0 || std::abs(s.length - geom) > kLengthTol)
            throw std::invalid_argument("street length must equal endpoint distance");
        adjacency_[static_cast<std::size_t>(s.a)].push_back({s.id, s.b});
        adjacency_[static_cast<std::size_t>(s.b)].push_back({s.id, s.a});
    }
    for (auto& adj : adjacency_)
        std::sort(adj.begin(), adj.end(),
                  [](const AdjacencyEntry& l, const AdjacencyEntry& r) { return l.street < r.street; });
}

StreetGraph build_grid(int cols, int rows, double dx, double dy) {
    if (cols < 1 || rows < 1 || static_cast<long>(cols) * rows < 2)
        throw std::invalid_argument("grid needs at least two intersections");
    if (dx <= 0.0 || dy <= 0.0)
        throw std::invalid_argument("grid spacing must be positive");

    std::vector<Intersection> intersections;
    intersections.reserve(static_cast<std::size_t>(cols) * rows);
    for (int j = 0; j < rows; ++j)
        for (int i = 0; i < cols; ++i)
            intersections.push_back({static_cast<IntersectionId>(j * cols + i), {i * dx, j * dy}});

    const auto vertex = [cols](int i, int j) { return static_cast<IntersectionId>(j * cols + i); };
    std::vector<Street> streets;
    StreetId next = 0;
    for (int j = 0; j < rows; ++j) {
        for (int i = 0; i < cols; ++i) {
            if (i + 1 < cols)
                streets.push_back({next++, vertex(i, j), vertex(i + 1, j), dx});
            if (j + 1 < rows)
                streets.push_back({next++, vertex(i, j), vertex(i, j + 1), dy});
        }
    }
    return StreetGraph(std::move(intersections), std::move(streets));
}

std::optional<std::vector<IntersectionId>> dijkstra(const StreetGraph& graph,
                                                    const CostMatrix& costs,
                                                    IntersectionId src, IntersectionId dst) {
    const auto n = graph.num_intersections();
    if (src < 0 || static_cast<std::size_t>(src) >= n || dst < 0 ||
        static_cast<std::size_t>(dst) >= n)
        throw std::out_of_range("dijkstra endpoint out of range");
    if (costs.size() != graph.num_streets())
        throw std::invalid_argument("cost matrix size mismatch");
    for (double c : costs.cost) {
        if (!(c >= 0.0) || !std::isfinite(c))
            throw std::invalid_argument("costs must be finite and nonnegative");
    }

    // Backward pass from dst gives, per vertex, the optimal (cost, hops)
    // label; the forward walk then picks the smallest next id among
    // neighbors that stay on an optimal label, which makes ties
    // deterministic in the order the contract requires.
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, kInf);
    std::vector<std::int64_t> hops(n, std::numeric_limits<std::int64_t>::max());
    using Label = std::tuple<double, std::int64_t, IntersectionId>;
    std::priority_queue<Label, std::vector<Label>, std::greater<>> pq;
    dist[static_cast<std::size_t>(dst)] = 0.0;
    hops[static_cast<std::size_t>(dst)] = 0;
    pq.push({0.0, 0, dst});
    while (!pq.empty()) {
        auto [d, h, u] = pq.top();
        pq.pop();
        if (d > dist[static_cast<std::size_t>(u)] ||
            (d == dist[static_cast<std::size_t>(u)] && h > hops[static_cast<std::size_t>(u)]))
            continue;
        for (const AdjacencyEntry& e : graph.adjacent(u)) {
            const double nd = d + costs[e.street];
            const std::int64_t nh = h + 1;
            auto& dd = dist[static_cast<std::size_t>(e.far)];
            auto& hh = hops[static_cast<std::size_t>(e.far)];
            if (nd < dd || (nd == dd && nh < hh)) {
                dd = nd;
                hh = nh;
                pq.push({nd, nh, e.far});
            }
        }
    }
    if (dist[static_cast<std::size_t>(src)] == kInf)
        return std::nullopt;

    std::vector<IntersectionId> path{src};
    IntersectionId cur = src;
    while (cur != dst) {
        IntersectionId best = -1;
        for (const AdjacencyEntry& e : graph.adjacent(cur)) {
            const bool optimal =
                dist[static_cast<std::size_t>(cur)] ==
                    costs[e.street] + dist[static_cast<std::size_t>(e.far)] &&
                hops[static_cast<std::size_t>(cur)] == hops[static_cast<std::size_t>(e.far)] + 1;
            if (optimal && (best == -1 || e.far < best))
                best = e.far;
        }
        cur = best;
        path.push_back(cur);
    }
    return path;
}

double path_cost(const StreetGraph& graph, const CostMatrix& costs,
                 const std::vector<IntersectionId>& path) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (const AdjacencyEntry& e : graph.adjacent(path[i]))
            if (e.far == path[i + 1])
                best = std::min(best, costs[e.street]);
        total += best;
    }
    return total;
}

IntersectionId nearest_intersection(const StreetGraph& graph, Vec2 p) {
    IntersectionId best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (const Intersection& v : graph.intersections()) {
        const double d = distance(p, v.position);
        if (d < best_d) {
            best_d = d;
            best = v.id;
        }
    }
    return best;
}

std::optional<StreetId> locate_street(const StreetGraph& graph, Vec2 p, double tol) {
    for (const Street& s : graph.streets()) {
        if (point_segment_distance(p, graph.position(s.a), graph.position(s.b)) <= tol)
            return s.id;
    }
    return std::nullopt;
}

std::vector<StreetId> locate_streets(const StreetGraph& graph, Vec2 p, double tol) {
    std::vector<StreetId> out;
    for (const Street& s : graph.streets()) {
        if (point_segment_distance(p, graph.position(s.a), graph.position(s.b)) <= tol)
            out.push_back(s.id);
    }
    return out;
}

}  // namespace vanetsim
