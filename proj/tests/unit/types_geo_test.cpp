#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "geovec/error.hpp"
#include "geovec/geo.hpp"
#include "geovec/types.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace geovec;

namespace {
constexpr double R = 6'371'000.0;
const double kDeg = std::numbers::pi / 180.0;
}  // namespace

TEST_CASE("GeoPoint validates its range") {
    CHECK_NOTHROW(GeoPoint(90.0, 180.0));
    CHECK_NOTHROW(GeoPoint(-90.0, -179.999));
    CHECK_THROWS_AS(GeoPoint(90.0001, 0.0), InvalidInput);
    CHECK_THROWS_AS(GeoPoint(0.0, 180.5), InvalidInput);
    CHECK_THROWS_AS(GeoPoint(NAN, 0.0), InvalidInput);
    CHECK_THROWS_AS(GeoPoint(0.0, INFINITY), InvalidInput);
    CHECK(GeoPoint(10.0, -180.0).lon() == 180.0);
    CHECK(GeoPoint::valid(0.0, 0.0));
    CHECK_FALSE(GeoPoint::valid(-91.0, 0.0));
}

TEST_CASE("entity kind names") {
    CHECK(to_string(EntityKind::node) == "node");
    CHECK(to_string(EntityKind::way) == "way");
    CHECK(to_string(EntityKind::relation) == "relation");
    CHECK(parse_kind("relation") == EntityKind::relation);
    CHECK_FALSE(parse_kind("Node").has_value());
    CHECK_FALSE(parse_kind("").has_value());
}

TEST_CASE("Region bounding box and derivation") {
    const Region r = Region::bounding({{1.0, 2.0}, {-3.0, 5.0}, {0.5, -1.0}});
    CHECK(r == Region{-3.0, -1.0, 1.0, 5.0});
    CHECK(Region::bounding({}) == Region{});
    CHECK(r.contains({0.0, 0.0}));
    CHECK_FALSE(r.contains({2.0, 0.0}));

    Snapshot s;
    s.entities = {{1, EntityKind::node, {}, {10, 20}}, {2, EntityKind::node, {}, {11, 19}}};
    derive_region(s);
    CHECK(s.region == Region{10, 19, 11, 20});
}

TEST_CASE("haversine examples") {
    const GeoPoint berlin(52.5170365, 13.3888599);
    const GeoPoint paris(48.8566, 2.3522);
    CHECK(haversine(berlin, berlin) == 0.0);
    CHECK(haversine({0, 0}, {0, 1}) == doctest::Approx(R * std::numbers::pi / 180.0).epsilon(1e-12));
    CHECK(haversine({0, 0}, {0, 1}) == doctest::Approx(111'194.93).epsilon(1e-7));
    const double want = oracle::great_circle(52.5170365, 13.3888599, 48.8566, 2.3522);
    CHECK(std::abs(haversine(berlin, paris) - want) <= 1.0);
    CHECK(haversine({90, 0}, {-90, 0}) == doctest::Approx(R * std::numbers::pi).epsilon(1e-12));
    CHECK(haversine({0, 179.5}, {0, -179.5}) == doctest::Approx(R * kDeg).epsilon(1e-9));
}

TEST_CASE("haversine metric properties on random points") {
    const auto pts = synth::sphere_points(600, 11);
    for (std::size_t i = 0; i + 2 < pts.size(); i += 3) {
        const auto& a = pts[i];
        const auto& b = pts[i + 1];
        const auto& c = pts[i + 2];
        CHECK(haversine(a, b) == haversine(b, a));
        CHECK(haversine(a, b) > 0.0);
        CHECK(haversine(a, c) <= (haversine(a, b) + haversine(b, c)) * (1.0 + 1e-6));
        CHECK(std::abs(haversine(a, b) - oracle::great_circle(a.lat(), a.lon(), b.lat(), b.lon())) < 1e-6);
    }
}

TEST_CASE("geo_area examples") {
    CHECK(geo_area({-90, -180, 90, 180}) == doctest::Approx(4.0 * std::numbers::pi * R * R).epsilon(1e-12));
    CHECK(geo_area({-90, -180, 90, 180}) == doctest::Approx(5.1006e14).epsilon(1e-4));
    CHECK(geo_area({10, 5, 20, 5}) == 0.0);
    CHECK(geo_area({3, 5, 3, 9}) == 0.0);
    CHECK(geo_area({0, 0, 1, 1}) == doctest::Approx(R * R * kDeg * std::sin(kDeg)).epsilon(1e-12));
}

TEST_CASE("geo_area is monotone under enlargement") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> lat(-80, 80), lon(-170, 170), grow(0, 5);
    for (int i = 0; i < 200; ++i) {
        double a = lat(rng), b = lat(rng), c = lon(rng), d = lon(rng);
        const Region r{std::min(a, b), std::min(c, d), std::max(a, b), std::max(c, d)};
        const Region bigger{std::max(-90.0, r.min_lat - grow(rng)), std::max(-180.0, r.min_lon - grow(rng)),
                            std::min(90.0, r.max_lat + grow(rng)), std::min(180.0, r.max_lon + grow(rng))};
        CHECK(geo_area(bigger) >= geo_area(r));
    }
}

TEST_CASE("centroid examples") {
    const std::vector<GeoPoint> one = {{12.5, -70.25}};
    CHECK(centroid(one) == one.front());

    const std::vector<GeoPoint> sym = {{10, 50}, {-10, 50}};
    const auto c = centroid(sym);
    CHECK(c.lat() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c.lon() == doctest::Approx(50.0).epsilon(1e-12));

    const std::vector<GeoPoint> anti = {{0, 179.9}, {0, -179.9}};
    const auto a = centroid(anti);
    CHECK(std::abs(a.lat()) < 1e-9);
    CHECK(std::abs(a.lon()) == doctest::Approx(180.0).epsilon(1e-12));
    CHECK(a.lon() == 180.0);

    const std::vector<GeoPoint> opposite = {{0, 0}, {0, 180}};
    CHECK(centroid(opposite) == opposite.front());
    CHECK_THROWS_AS((void)centroid(std::span<const GeoPoint>{}), std::invalid_argument);
}

TEST_CASE("centroid equals the normalized unit-vector mean") {
    std::mt19937_64 rng(9);
    const auto pts = synth::sphere_points(400, 21);
    for (std::size_t start = 0; start + 8 <= pts.size(); start += 8) {
        const std::span<const GeoPoint> group(pts.data() + start, 8);
        double x = 0, y = 0, z = 0;
        for (const auto& p : group) {
            x += std::cos(p.lat() * kDeg) * std::cos(p.lon() * kDeg);
            y += std::cos(p.lat() * kDeg) * std::sin(p.lon() * kDeg);
            z += std::sin(p.lat() * kDeg);
        }
        const auto c = centroid(group);
        CHECK(c.lat() == doctest::Approx(std::atan2(z, std::hypot(x, y)) / kDeg).epsilon(1e-9));
        const double lon = std::atan2(y, x) / kDeg;
        CHECK(std::remainder(c.lon() - lon, 360.0) == doctest::Approx(0.0).epsilon(1e-9));
    }
}
