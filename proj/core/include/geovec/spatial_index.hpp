#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "geovec/geo.hpp"

namespace geovec {

struct Neighbor {
    std::size_t index = 0;  // position in the point set the index was built from
    double meters = 0.0;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Exact k-nearest-neighbor search under haversine distance.
///
/// Points are stored as 3-D unit vectors in a kd-tree. Chord distance bounds prune the search;
/// candidates are ranked by (haversine meters, insertion index), so results match a brute-force
/// scan with ties resolved by ascending insertion index. Immutable after construction, so
/// concurrent queries are safe.
class SpatialIndex {
public:
    SpatialIndex() = default;
    explicit SpatialIndex(std::vector<GeoPoint> points);

    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] bool empty() const noexcept { return points_.empty(); }
    [[nodiscard]] const std::vector<GeoPoint>& points() const noexcept { return points_; }

    /// min(k, size()) neighbors in ascending (distance, index) order.
    /// Throws InvalidInput on an empty index and std::invalid_argument for k = 0.
    [[nodiscard]] std::vector<Neighbor> knn(const GeoPoint& query, std::size_t k) const;

private:
    struct Node {
        UnitVector lo;
        UnitVector hi;
        std::uint32_t begin = 0;
        std::uint32_t end = 0;
        std::int32_t left = -1;
        std::int32_t right = -1;
    };

    std::int32_t build(std::uint32_t begin, std::uint32_t end);

    std::vector<GeoPoint> points_;
    std::vector<UnitVector> units_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
};

}  // namespace geovec
