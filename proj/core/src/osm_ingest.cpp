#include "geovec/osm_ingest.hpp"

#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>

#include "geovec/error.hpp"

namespace geovec {

namespace {

using nlohmann::json;

OsmEntity entity_from_json(const json& obj, std::size_t line) {
    if (!obj.is_object()) throw ParseError(line, "expected a JSON object");
    for (const char* field : {"id", "kind", "lat", "lon", "tags"}) {
        if (!obj.contains(field)) throw ParseError(line, std::string("missing field '") + field + "'");
    }
    const auto& id = obj["id"];
    if (!id.is_number_integer() || (id.is_number_integer() && !id.is_number_unsigned() && id.get<std::int64_t>() < 0)) {
        throw ParseError(line, "field 'id' must be a non-negative integer");
    }
    if (!obj["kind"].is_string()) throw ParseError(line, "field 'kind' must be a string");
    const auto kind = parse_kind(obj["kind"].get<std::string>());
    if (!kind) throw ParseError(line, "unknown kind '" + obj["kind"].get<std::string>() + "'");
    if (!obj["lat"].is_number() || !obj["lon"].is_number()) throw ParseError(line, "lat/lon must be numbers");
    const double lat = obj["lat"].get<double>();
    const double lon = obj["lon"].get<double>();
    if (!GeoPoint::valid(lat, lon)) {
        throw ParseError(line, "coordinate out of range for " + std::string(to_string(*kind)) + " " +
                                   std::to_string(id.get<std::uint64_t>()));
    }
    if (!obj["tags"].is_object()) throw ParseError(line, "field 'tags' must be an object");

    OsmEntity e;
    e.id = id.get<std::uint64_t>();
    e.kind = *kind;
    e.point = GeoPoint(lat, lon);
    for (const auto& [k, v] : obj["tags"].items()) {
        if (!v.is_string()) throw ParseError(line, "tag '" + k + "' must have a string value");
        e.tags.emplace(k, v.get<std::string>());
    }
    return e;
}

}  // namespace

Snapshot parse_jsonl(std::istream& in, std::string name) {
    Snapshot snapshot;
    snapshot.name = std::move(name);
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (text.find_first_not_of(" \t") == std::string::npos) continue;
        json obj;
        try {
            obj = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ParseError(line, std::string("invalid JSON: ") + e.what());
        }
        snapshot.entities.push_back(entity_from_json(obj, line));
    }
    derive_region(snapshot);
    return snapshot;
}

void write_jsonl(const Snapshot& snapshot, std::ostream& out) {
    for (const auto& e : snapshot.entities) {
        json tags = json::object();
        for (const auto& [k, v] : e.tags) tags[k] = v;
        // Keys are emitted in sorted order: id, kind, lat, lon, tags.
        const json obj = {{"id", e.id}, {"kind", to_string(e.kind)}, {"lat", e.point.lat()}, {"lon", e.point.lon()},
                          {"tags", std::move(tags)}};
        out << obj.dump(-1, ' ', false, json::error_handler_t::strict) << '\n';
    }
}

Snapshot filter_tagged(const Snapshot& snapshot) {
    Snapshot out;
    out.name = snapshot.name;
    out.region = snapshot.region;
    out.timestamp = snapshot.timestamp;
    for (const auto& e : snapshot.entities) {
        if (!e.tags.empty()) out.entities.push_back(e);
    }
    return out;
}

Snapshot load_snapshot(const std::filesystem::path& path, IngestReport* report) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open snapshot '" + path.string() + "'");
    const auto ext = path.extension().string();
    auto name = path.stem().string();
    if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") return parse_jsonl(in, std::move(name));
    return parse_osm_xml(in, std::move(name), report);
}

}  // namespace geovec
