#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "geovec/types.hpp"

namespace geovec {

enum class DampMode : std::uint8_t {
    /// w' = 1 / ln(max(w, e^(1/e))): decreasing in distance, capped at e.
    capped = 0,
    /// w' = max(1 / ln(w), e) taken literally; constant e for every distance above e^(1/e) m.
    literal = 1,
};

/// Distance below which the capped damped weight saturates at e: e^(1/e) ~ 1.4447 m.
inline const double kDampFloorMeters = std::exp(1.0 / std::numbers::e);

/// Damped edge weight for a haversine distance in meters. Always in (0, e].
[[nodiscard]] double damp(double meters, DampMode mode = DampMode::capped) noexcept;

struct Edge {
    std::uint32_t target = 0;
    double weight = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected k-NN graph over training points. Node i is training entity i.
struct WeightedGraph {
    std::vector<GeoPoint> points;
    std::vector<std::vector<Edge>> adjacency;  // sorted by target

    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
};

/// Directed k-NN edges under haversine (self excluded), symmetrized by edge union. Each
/// surviving edge carries damp(distance) with the distance measured once per unordered pair.
/// Throws InvalidInput for fewer than two points and std::invalid_argument for k = 0.
[[nodiscard]] WeightedGraph build_graph(std::span<const GeoPoint> points, std::size_t k = 50,
                                        DampMode mode = DampMode::capped, std::size_t threads = 1);

/// Fixed-length walks stored back to back.
struct WalkCorpus {
    std::size_t walk_length = 0;
    std::vector<std::uint32_t> tokens;

    [[nodiscard]] std::size_t walk_count() const noexcept {
        return walk_length == 0 ? 0 : tokens.size() / walk_length;
    }
    [[nodiscard]] std::span<const std::uint32_t> walk(std::size_t i) const noexcept {
        return {tokens.data() + i * walk_length, walk_length};
    }
};

/// walks_per_node passes; each pass visits every node once in a seeded shuffled order and
/// starts a walk of walk_length nodes (the start node included) there. Steps follow the
/// normalized damped weights. Every walk has its own stream derived from (seed, pass, start),
/// so the corpus is identical for any thread count.
/// Throws InvalidInput if a node has no neighbor.
[[nodiscard]] WalkCorpus random_walks(const WeightedGraph& g, std::size_t walks_per_node, std::size_t walk_length,
                                      std::uint64_t seed, std::size_t threads = 1);

}  // namespace geovec
