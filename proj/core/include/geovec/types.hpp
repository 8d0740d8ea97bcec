#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace geovec {

enum class EntityKind : std::uint8_t { node = 0, way = 1, relation = 2 };

[[nodiscard]] std::string_view to_string(EntityKind kind) noexcept;
[[nodiscard]] std::optional<EntityKind> parse_kind(std::string_view text) noexcept;

/// WGS84 coordinate in degrees. lat in [-90, 90], lon in (-180, 180].
class GeoPoint {
public:
    constexpr GeoPoint() = default;

    /// Throws InvalidInput when out of range or non-finite. lon = -180 is folded onto 180.
    GeoPoint(double lat, double lon);

    [[nodiscard]] constexpr double lat() const noexcept { return lat_; }
    [[nodiscard]] constexpr double lon() const noexcept { return lon_; }

    [[nodiscard]] static bool valid(double lat, double lon) noexcept;

    friend constexpr bool operator==(const GeoPoint&, const GeoPoint&) = default;

private:
    double lat_ = 0.0;
    double lon_ = 0.0;
};

/// Axis-aligned lat/lon box. Never wraps the antimeridian.
struct Region {
    double min_lat = 0.0;
    double min_lon = 0.0;
    double max_lat = 0.0;
    double max_lon = 0.0;

    [[nodiscard]] bool contains(const GeoPoint& p) const noexcept {
        return p.lat() >= min_lat && p.lat() <= max_lat && p.lon() >= min_lon && p.lon() <= max_lon;
    }

    /// Smallest box holding every point; the zero box at the origin for an empty input.
    [[nodiscard]] static Region bounding(const std::vector<GeoPoint>& points);

    friend bool operator==(const Region&, const Region&) = default;
};

/// Tag keys are unique, so a sorted map is the tag set.
using TagSet = std::map<std::string, std::string, std::less<>>;

struct OsmEntity {
    std::uint64_t id = 0;
    EntityKind kind = EntityKind::node;
    TagSet tags;
    GeoPoint point;

    friend bool operator==(const OsmEntity&, const OsmEntity&) = default;
};

struct Snapshot {
    std::string name;
    Region region;
    std::string timestamp;  // ISO-8601 date, empty when unknown
    std::vector<OsmEntity> entities;

    friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

/// Recomputes the region as the tight bounding box of the entity points.
void derive_region(Snapshot& snapshot);

}  // namespace geovec
