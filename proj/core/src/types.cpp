#include "geovec/types.hpp"

#include <algorithm>
#include <cmath>

#include "geovec/error.hpp"

namespace geovec {

std::string_view to_string(EntityKind kind) noexcept {
    switch (kind) {
        case EntityKind::node: return "node";
        case EntityKind::way: return "way";
        case EntityKind::relation: return "relation";
    }
    return "node";
}

std::optional<EntityKind> parse_kind(std::string_view text) noexcept {
    if (text == "node") return EntityKind::node;
    if (text == "way") return EntityKind::way;
    if (text == "relation") return EntityKind::relation;
    return std::nullopt;
}

bool GeoPoint::valid(double lat, double lon) noexcept {
    return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 && lon >= -180.0 &&
           lon <= 180.0;
}

GeoPoint::GeoPoint(double lat, double lon) : lat_(lat), lon_(lon) {
    if (!valid(lat, lon)) {
        throw InvalidInput("coordinate out of range: lat=" + std::to_string(lat) + " lon=" + std::to_string(lon));
    }
    if (lon_ == -180.0) lon_ = 180.0;
}

Region Region::bounding(const std::vector<GeoPoint>& points) {
    if (points.empty()) return {};
    Region r{points.front().lat(), points.front().lon(), points.front().lat(), points.front().lon()};
    for (const auto& p : points) {
        r.min_lat = std::min(r.min_lat, p.lat());
        r.max_lat = std::max(r.max_lat, p.lat());
        r.min_lon = std::min(r.min_lon, p.lon());
        r.max_lon = std::max(r.max_lon, p.lon());
    }
    return r;
}

void derive_region(Snapshot& snapshot) {
    std::vector<GeoPoint> points;
    points.reserve(snapshot.entities.size());
    for (const auto& e : snapshot.entities) points.push_back(e.point);
    snapshot.region = Region::bounding(points);
}

}  // namespace geovec
