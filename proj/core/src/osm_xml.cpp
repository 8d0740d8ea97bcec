// OSM XML ingestion on top of expat.

#include <expat.h>

#include <charconv>
#include <cstring>
#include <istream>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "geovec/error.hpp"
#include "geovec/geo.hpp"
#include "geovec/osm_ingest.hpp"

namespace geovec {

namespace {

struct Member {
    EntityKind kind;
    std::uint64_t ref;
};

struct RawEntity {
    std::uint64_t id = 0;
    EntityKind kind = EntityKind::node;
    TagSet tags;
    std::optional<GeoPoint> point;  // nodes only
    std::vector<Member> members;
};

class XmlReader {
public:
    XmlReader() : parser_(XML_ParserCreate("UTF-8")) {
        XML_SetUserData(parser_, this);
        XML_SetElementHandler(parser_, &XmlReader::on_start, &XmlReader::on_end);
    }
    ~XmlReader() { XML_ParserFree(parser_); }
    XmlReader(const XmlReader&) = delete;
    XmlReader& operator=(const XmlReader&) = delete;

    void feed(std::istream& in) {
        std::vector<char> buffer(1 << 16);
        while (true) {
            in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
            const auto got = static_cast<int>(in.gcount());
            const bool last = got == 0 || in.eof();
            if (XML_Parse(parser_, buffer.data(), got, last ? 1 : 0) == XML_STATUS_ERROR) fail_from_expat();
            if (last) break;
        }
    }

    std::vector<RawEntity> entities;
    std::optional<Region> bounds;
    std::string timestamp;

private:
    [[noreturn]] void fail_from_expat() {
        if (pending_) throw *pending_;
        const auto line = static_cast<std::size_t>(XML_GetCurrentLineNumber(parser_));
        throw ParseError(line, std::string("malformed OSM XML: ") + XML_ErrorString(XML_GetErrorCode(parser_)));
    }

    void abort(const std::string& message) {
        if (!pending_) {
            pending_.emplace(static_cast<std::size_t>(XML_GetCurrentLineNumber(parser_)), message);
            XML_StopParser(parser_, XML_FALSE);
        }
    }

    static const char* attr(const XML_Char** attrs, const char* name) {
        for (std::size_t i = 0; attrs[i] != nullptr; i += 2) {
            if (std::strcmp(attrs[i], name) == 0) return attrs[i + 1];
        }
        return nullptr;
    }

    std::optional<std::uint64_t> parse_id(const char* text) {
        if (text == nullptr) return std::nullopt;
        std::uint64_t value = 0;
        const auto* end = text + std::strlen(text);
        const auto [ptr, ec] = std::from_chars(text, end, value);
        if (ec != std::errc() || ptr != end) return std::nullopt;
        return value;
    }

    std::optional<double> parse_double(const char* text) {
        if (text == nullptr) return std::nullopt;
        double value = 0.0;
        const auto* end = text + std::strlen(text);
        const auto [ptr, ec] = std::from_chars(text, end, value);
        if (ec != std::errc() || ptr != end) return std::nullopt;
        return value;
    }

    static void XMLCALL on_start(void* self, const XML_Char* name, const XML_Char** attrs) {
        static_cast<XmlReader*>(self)->start(name, attrs);
    }
    static void XMLCALL on_end(void* self, const XML_Char* name) { static_cast<XmlReader*>(self)->end(name); }

    void start(std::string_view name, const XML_Char** attrs) {
        if (pending_) return;
        ++depth_;
        if (depth_ == 1) {
            if (name != "osm") abort("root element must be <osm>, found <" + std::string(name) + ">");
            if (const char* ts = attr(attrs, "timestamp")) timestamp = std::string(ts).substr(0, 10);
            return;
        }
        if (depth_ == 2) {
            start_top_level(name, attrs);
            return;
        }
        if (!current_ || depth_ != 3) return;
        if (name == "tag") {
            const char* k = attr(attrs, "k");
            const char* v = attr(attrs, "v");
            if (k == nullptr || v == nullptr) {
                abort("<tag> requires k and v attributes");
                return;
            }
            current_->tags.insert_or_assign(k, v);
        } else if (name == "nd" && current_->kind == EntityKind::way) {
            const auto ref = parse_id(attr(attrs, "ref"));
            if (!ref) {
                abort("<nd> in way " + std::to_string(current_->id) + " has an invalid ref");
                return;
            }
            current_->members.push_back({EntityKind::node, *ref});
        } else if (name == "member" && current_->kind == EntityKind::relation) {
            const char* type = attr(attrs, "type");
            const auto kind = type != nullptr ? parse_kind(type) : std::nullopt;
            const auto ref = parse_id(attr(attrs, "ref"));
            if (!kind || !ref) {
                abort("<member> in relation " + std::to_string(current_->id) + " needs type and ref");
                return;
            }
            current_->members.push_back({*kind, *ref});
        }
    }

    void start_top_level(std::string_view name, const XML_Char** attrs) {
        if (name == "bounds") {
            const auto a = parse_double(attr(attrs, "minlat"));
            const auto b = parse_double(attr(attrs, "minlon"));
            const auto c = parse_double(attr(attrs, "maxlat"));
            const auto d = parse_double(attr(attrs, "maxlon"));
            if (!a || !b || !c || !d || !GeoPoint::valid(*a, *b) || !GeoPoint::valid(*c, *d) || *a > *c || *b > *d) {
                abort("invalid <bounds> element");
                return;
            }
            bounds = Region{*a, *b, *c, *d};
            return;
        }
        if (name == "meta" && timestamp.empty()) {
            if (const char* base = attr(attrs, "osm_base")) timestamp = std::string(base).substr(0, 10);
            return;
        }
        const auto kind = parse_kind(name);
        if (!kind) return;
        const auto id = parse_id(attr(attrs, "id"));
        if (!id) {
            abort("<" + std::string(name) + "> has a missing or non-integer id");
            return;
        }
        RawEntity raw;
        raw.id = *id;
        raw.kind = *kind;
        if (*kind == EntityKind::node) {
            const auto lat = parse_double(attr(attrs, "lat"));
            const auto lon = parse_double(attr(attrs, "lon"));
            if (!lat || !lon) {
                abort("node " + std::to_string(*id) + " has a missing or non-numeric coordinate");
                return;
            }
            if (!GeoPoint::valid(*lat, *lon)) {
                abort("node " + std::to_string(*id) + " coordinate out of range (lat=" + attr(attrs, "lat") +
                      ", lon=" + attr(attrs, "lon") + ")");
                return;
            }
            raw.point = GeoPoint(*lat, *lon);
        }
        current_ = std::move(raw);
    }

    void end(std::string_view /*name*/) {
        if (pending_) return;
        if (depth_ == 2 && current_) {
            entities.push_back(std::move(*current_));
            current_.reset();
        }
        --depth_;
    }

    XML_Parser parser_;
    int depth_ = 0;
    std::optional<RawEntity> current_;
    std::optional<ParseError> pending_;
};

struct KeyHash {
    std::size_t operator()(const std::pair<EntityKind, std::uint64_t>& k) const noexcept {
        return std::hash<std::uint64_t>{}(k.second * 3 + static_cast<std::uint64_t>(k.first));
    }
};

// A member that leads back to an entity still being resolved is skipped. Results that
// depended on such a cut are not cached, so every entity sees the same cycle-free view of
// its own member tree regardless of file order.
class Resolver {
public:
    Resolver(const std::vector<RawEntity>& raw, IngestReport& report) : raw_(raw) {
        for (std::size_t i = 0; i < raw.size(); ++i) by_key_.emplace(std::pair{raw[i].kind, raw[i].id}, i);
        state_.assign(raw.size(), State::pending);
        points_.resize(raw.size());
        for (const auto& e : raw) {
            std::unordered_set<std::pair<EntityKind, std::uint64_t>, KeyHash> seen;
            for (const auto& m : e.members) {
                const std::pair key{m.kind, m.ref};
                if (seen.insert(key).second && !by_key_.contains(key)) ++report.missing_members;
            }
        }
    }

    std::optional<GeoPoint> resolve(std::size_t i) { return visit(i).point; }

private:
    enum class State : std::uint8_t { pending, active, done };

    struct Visit {
        std::optional<GeoPoint> point;
        bool cut = false;
    };

    Visit visit(std::size_t i) {
        if (state_[i] == State::done) return {points_[i], false};
        if (state_[i] == State::active) return {std::nullopt, true};
        const RawEntity& e = raw_[i];
        if (e.point) {
            points_[i] = e.point;
            state_[i] = State::done;
            return {points_[i], false};
        }
        state_[i] = State::active;
        bool cut = false;
        std::vector<GeoPoint> member_points;
        std::unordered_set<std::pair<EntityKind, std::uint64_t>, KeyHash> seen;
        for (const auto& m : e.members) {
            const std::pair key{m.kind, m.ref};
            if (!seen.insert(key).second) continue;
            const auto it = by_key_.find(key);
            if (it == by_key_.end()) continue;
            const auto r = visit(it->second);
            cut = cut || r.cut;
            if (r.point) member_points.push_back(*r.point);
        }
        std::optional<GeoPoint> point;
        if (!member_points.empty()) point = centroid(member_points);
        if (cut) {
            state_[i] = State::pending;
        } else {
            points_[i] = point;
            state_[i] = State::done;
        }
        return {point, cut};
    }

    const std::vector<RawEntity>& raw_;
    std::unordered_map<std::pair<EntityKind, std::uint64_t>, std::size_t, KeyHash> by_key_;
    std::vector<State> state_;
    std::vector<std::optional<GeoPoint>> points_;
};

}  // namespace

Snapshot parse_osm_xml(std::istream& in, std::string name, IngestReport* report) {
    XmlReader reader;
    reader.feed(in);

    IngestReport local;
    IngestReport& counters = report != nullptr ? *report : local;
    Resolver resolver(reader.entities, counters);

    Snapshot snapshot;
    snapshot.name = std::move(name);
    snapshot.timestamp = reader.timestamp;
    snapshot.entities.reserve(reader.entities.size());
    for (std::size_t i = 0; i < reader.entities.size(); ++i) {
        const auto point = resolver.resolve(i);
        if (!point) {
            ++counters.dropped_entities;
            continue;
        }
        auto& raw = reader.entities[i];
        snapshot.entities.push_back(OsmEntity{raw.id, raw.kind, std::move(raw.tags), *point});
    }
    derive_region(snapshot);
    if (reader.bounds) {
        auto& r = snapshot.region;
        const auto& b = *reader.bounds;
        if (snapshot.entities.empty()) {
            r = b;
        } else {
            r = Region{std::min(r.min_lat, b.min_lat), std::min(r.min_lon, b.min_lon), std::max(r.max_lat, b.max_lat),
                       std::max(r.max_lon, b.max_lon)};
        }
    }
    return snapshot;
}

}  // namespace geovec
