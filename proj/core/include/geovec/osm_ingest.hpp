#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "geovec/types.hpp"

namespace geovec {

/// Counters for input that was tolerated rather than rejected.
struct IngestReport {
    std::size_t missing_members = 0;    // way/relation members referencing ids absent from the file
    std::size_t dropped_entities = 0;   // ways/relations with no resolvable member coordinate
};

/// Parses OSM XML (`<osm>` with node/way/relation, tag, nd and member elements).
///
/// Ways take the spherical centroid of their distinct member nodes. Relations take the centroid
/// of their resolvable members' points, resolving member ways and relations recursively; members
/// on a reference cycle do not resolve. The region is the tight bounding box over retained points,
/// widened by a `<bounds>` element when the file has one.
///
/// Throws ParseError (with line number) on malformed XML or out-of-range node coordinates.
[[nodiscard]] Snapshot parse_osm_xml(std::istream& in, std::string name = {}, IngestReport* report = nullptr);

/// Parses the JSON-lines intermediate: one `{"id","kind","lat","lon","tags"}` object per line.
/// Blank lines are ignored. Throws ParseError naming the offending line.
[[nodiscard]] Snapshot parse_jsonl(std::istream& in, std::string name = {});

/// Writes entities in the JSON-lines intermediate; the inverse of parse_jsonl.
void write_jsonl(const Snapshot& snapshot, std::ostream& out);

/// Entities with at least one tag, order preserved.
[[nodiscard]] Snapshot filter_tagged(const Snapshot& snapshot);

/// Loads a snapshot file, choosing the parser by extension (.osm/.xml vs .jsonl/.json).
/// The snapshot name is the file stem. Throws Error when the file cannot be opened.
[[nodiscard]] Snapshot load_snapshot(const std::filesystem::path& path, IngestReport* report = nullptr);

}  // namespace geovec
