#include "geovec/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace geovec {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

double haversine(const GeoPoint& a, const GeoPoint& b) noexcept {
    const double phi1 = a.lat() * kDegToRad;
    const double phi2 = b.lat() * kDegToRad;
    const double sin_dphi = std::sin((b.lat() - a.lat()) * kDegToRad / 2.0);
    const double sin_dlambda = std::sin((b.lon() - a.lon()) * kDegToRad / 2.0);
    const double h = sin_dphi * sin_dphi + std::cos(phi1) * std::cos(phi2) * sin_dlambda * sin_dlambda;
    return 2.0 * kEarthRadiusMeters * std::asin(std::sqrt(std::clamp(h, 0.0, 1.0)));
}

double geo_area(const Region& r) noexcept {
    const double dlambda = (r.max_lon - r.min_lon) * kDegToRad;
    const double band = std::sin(r.max_lat * kDegToRad) - std::sin(r.min_lat * kDegToRad);
    return kEarthRadiusMeters * kEarthRadiusMeters * dlambda * band;
}

UnitVector to_unit_vector(const GeoPoint& p) noexcept {
    const double phi = p.lat() * kDegToRad;
    const double lambda = p.lon() * kDegToRad;
    return {std::cos(phi) * std::cos(lambda), std::cos(phi) * std::sin(lambda), std::sin(phi)};
}

GeoPoint centroid(std::span<const GeoPoint> points) {
    if (points.empty()) throw std::invalid_argument("centroid of an empty point set");
    if (points.size() == 1) return points.front();

    UnitVector sum{0.0, 0.0, 0.0};
    for (const auto& p : points) {
        const auto v = to_unit_vector(p);
        for (std::size_t i = 0; i < 3; ++i) sum[i] += v[i];
    }
    for (auto& c : sum) c /= static_cast<double>(points.size());
    const double norm = std::sqrt(sum[0] * sum[0] + sum[1] * sum[1] + sum[2] * sum[2]);
    if (norm < 1e-12) return points.front();

    const double lat = std::asin(std::clamp(sum[2] / norm, -1.0, 1.0)) / kDegToRad;
    double lon = std::atan2(sum[1], sum[0]) / kDegToRad;
    return GeoPoint(std::clamp(lat, -90.0, 90.0), std::clamp(lon, -180.0, 180.0));
}

}  // namespace geovec
