#include "geovec/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "geovec/error.hpp"

namespace geovec {

namespace {

constexpr std::uint32_t kLeafSize = 16;

// Total order used for ranking candidates.
struct Closer {
    bool operator()(const Neighbor& a, const Neighbor& b) const noexcept {
        return a.meters < b.meters || (a.meters == b.meters && a.index < b.index);
    }
};

// Lower bound on the haversine distance from a unit vector to any point in an axis-aligned box.
// Relaxed slightly so float error in the chord never prunes a true neighbor.
double box_lower_bound(const UnitVector& q, const UnitVector& lo, const UnitVector& hi) noexcept {
    double sq = 0.0;
    for (std::size_t axis = 0; axis < 3; ++axis) {
        double gap = 0.0;
        if (q[axis] < lo[axis]) gap = lo[axis] - q[axis];
        else if (q[axis] > hi[axis]) gap = q[axis] - hi[axis];
        sq += gap * gap;
    }
    const double chord = std::sqrt(sq);
    const double meters = 2.0 * kEarthRadiusMeters * std::asin(std::min(1.0, chord / 2.0));
    return meters * (1.0 - 1e-9) - 1e-6;
}

}  // namespace

SpatialIndex::SpatialIndex(std::vector<GeoPoint> points) : points_(std::move(points)) {
    if (points_.size() >= std::numeric_limits<std::uint32_t>::max()) {
        throw InvalidInput("spatial index supports fewer than 2^32 points");
    }
    units_.reserve(points_.size());
    for (const auto& p : points_) units_.push_back(to_unit_vector(p));
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0U);
    if (!points_.empty()) {
        nodes_.reserve(2 * points_.size() / kLeafSize + 2);
        build(0, static_cast<std::uint32_t>(points_.size()));
    }
}

std::int32_t SpatialIndex::build(std::uint32_t begin, std::uint32_t end) {
    Node node;
    node.begin = begin;
    node.end = end;
    node.lo = units_[order_[begin]];
    node.hi = node.lo;
    for (std::uint32_t i = begin; i < end; ++i) {
        const auto& u = units_[order_[i]];
        for (std::size_t axis = 0; axis < 3; ++axis) {
            node.lo[axis] = std::min(node.lo[axis], u[axis]);
            node.hi[axis] = std::max(node.hi[axis], u[axis]);
        }
    }
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(node);
    if (end - begin <= kLeafSize) return id;

    std::size_t axis = 0;
    for (std::size_t a = 1; a < 3; ++a) {
        if (node.hi[a] - node.lo[a] > node.hi[axis] - node.lo[axis]) axis = a;
    }
    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                         return units_[a][axis] < units_[b][axis] || (units_[a][axis] == units_[b][axis] && a < b);
                     });
    const auto left = build(begin, mid);
    const auto right = build(mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

std::vector<Neighbor> SpatialIndex::knn(const GeoPoint& query, std::size_t k) const {
    if (points_.empty()) throw InvalidInput("k-NN query on an empty spatial index");
    if (k == 0) throw std::invalid_argument("k-NN query with k = 0");
    k = std::min(k, points_.size());

    const auto q = to_unit_vector(query);
    // Max-heap on Closer: top() is the current worst of the best k.
    std::priority_queue<Neighbor, std::vector<Neighbor>, Closer> best;

    // Best-first traversal over nodes ordered by their lower bound.
    using Pending = std::pair<double, std::int32_t>;
    std::priority_queue<Pending, std::vector<Pending>, std::greater<>> frontier;
    frontier.emplace(box_lower_bound(q, nodes_[0].lo, nodes_[0].hi), 0);

    while (!frontier.empty()) {
        const auto [bound, id] = frontier.top();
        frontier.pop();
        if (best.size() == k && bound > best.top().meters) break;

        const Node& node = nodes_[static_cast<std::size_t>(id)];
        if (node.left < 0) {
            for (std::uint32_t i = node.begin; i < node.end; ++i) {
                const Neighbor cand{order_[i], haversine(query, points_[order_[i]])};
                if (best.size() < k) {
                    best.push(cand);
                } else if (Closer{}(cand, best.top())) {
                    best.pop();
                    best.push(cand);
                }
            }
            continue;
        }
        for (const auto child : {node.left, node.right}) {
            const Node& c = nodes_[static_cast<std::size_t>(child)];
            const double lb = box_lower_bound(q, c.lo, c.hi);
            if (best.size() < k || lb <= best.top().meters) frontier.emplace(lb, child);
        }
    }

    std::vector<Neighbor> out(best.size());
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
        *it = best.top();
        best.pop();
    }
    return out;
}

}  // namespace geovec
