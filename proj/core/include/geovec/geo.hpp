#pragma once

#include <array>
#include <span>

#include "geovec/types.hpp"

namespace geovec {

/// Mean Earth radius in meters.
inline constexpr double kEarthRadiusMeters = 6'371'000.0;

/// Great-circle distance in meters.
[[nodiscard]] double haversine(const GeoPoint& a, const GeoPoint& b) noexcept;

/// Area of a lat/lon box on the sphere in square meters: R^2 * dlon * (sin(max_lat) - sin(min_lat)).
[[nodiscard]] double geo_area(const Region& r) noexcept;

using UnitVector = std::array<double, 3>;

[[nodiscard]] UnitVector to_unit_vector(const GeoPoint& p) noexcept;

/// Spherical centroid: mean of the 3-D unit vectors, renormalized. Falls back to the first
/// point when the mean vector vanishes (norm < 1e-12). Throws std::invalid_argument on empty input.
[[nodiscard]] GeoPoint centroid(std::span<const GeoPoint> points);

}  // namespace geovec
