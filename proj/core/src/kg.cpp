#include "geovec/kg.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <ostream>

#include "geovec/emb_io.hpp"
#include "geovec/error.hpp"

namespace geovec::kg {

namespace {

bool iri_forbidden(unsigned char c) noexcept {
    if (c <= 0x20 || c == 0x7f) return true;
    switch (c) {
        case '<': case '>': case '"': case '{': case '}': case '|': case '^': case '`': case '\\':
            return true;
        default:
            return false;
    }
}

std::string percent(unsigned char c) {
    char buf[4];
    std::snprintf(buf, sizeof buf, "%%%02X", static_cast<unsigned>(c));
    return buf;
}

std::string escape_iri(std::string_view iri) {
    std::string out;
    out.reserve(iri.size());
    for (const char ch : iri) {
        const auto c = static_cast<unsigned char>(ch);
        if (iri_forbidden(c)) out += percent(c);
        else out.push_back(ch);
    }
    return out;
}

std::string escape_literal(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (const char ch : text) {
        switch (ch) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20 || ch == 0x7f) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04X", static_cast<unsigned>(static_cast<unsigned char>(ch)));
                    out += buf;
                } else {
                    out.push_back(ch);
                }
        }
    }
    return out;
}

char kind_letter(EntityKind k) noexcept {
    switch (k) {
        case EntityKind::node: return 'n';
        case EntityKind::way: return 'w';
        case EntityKind::relation: return 'r';
    }
    return 'n';
}

std::string_view lgd_class(EntityKind k) noexcept {
    switch (k) {
        case EntityKind::node: return "Node";
        case EntityKind::way: return "Way";
        case EntityKind::relation: return "Relation";
    }
    return "Node";
}

bool valid_qid(std::string_view v) noexcept {
    return v.size() >= 2 && v[0] == 'Q' && std::all_of(v.begin() + 1, v.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool valid_language(std::string_view lang) noexcept {
    if (lang.size() < 2) return false;
    bool prev_dash = true;
    for (const char c : lang) {
        if (c == '-') {
            if (prev_dash) return false;
            prev_dash = true;
        } else if (c >= 'a' && c <= 'z') {
            prev_dash = false;
        } else {
            return false;
        }
    }
    return !prev_dash;
}

std::string_view trim(std::string_view s) noexcept {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
}

}  // namespace

std::string Term::to_ntriples() const {
    if (type == Type::iri) return "<" + escape_iri(value) + ">";
    std::string out = "\"" + escape_literal(value) + "\"";
    if (!language.empty()) out += "@" + language;
    else if (!datatype.empty()) out += "^^<" + escape_iri(datatype) + ">";
    return out;
}

std::string Triple::to_ntriples() const {
    return subject.to_ntriples() + " " + predicate.to_ntriples() + " " + object.to_ntriples() + " .";
}

bool valid_version_label(std::string_view label) noexcept {
    return label.size() >= 2 && label[0] == 'v' &&
           std::all_of(label.begin() + 1, label.end(), [](char c) { return c >= '0' && c <= '9'; });
}

void validate(const KgConfig& cfg) {
    if (!valid_version_label(cfg.version)) throw InvalidInput("version label must match v[0-9]+, got '" + cfg.version + "'");
    const auto& d = cfg.generated_date;
    const bool date_ok = d.size() == 10 && d[4] == '-' && d[7] == '-' &&
                         std::all_of(d.begin(), d.end(), [](char c) { return c == '-' || (c >= '0' && c <= '9'); });
    if (!date_ok) throw InvalidInput("generation date must be YYYY-MM-DD, got '" + d + "'");
}

std::string entity_iri(const KgConfig& cfg, const OsmEntity& e) {
    return cfg.ns.geovec + cfg.version + "_" + kind_letter(e.kind) + "_" + std::to_string(e.id);
}

std::string collection_iri(const KgConfig& cfg) { return cfg.ns.geovec + cfg.version + "/collection"; }

std::string encode_title(std::string_view title) {
    std::string out;
    for (const char ch : title) {
        const auto c = static_cast<unsigned char>(ch);
        if (ch == ' ') out.push_back('_');
        else if (iri_forbidden(c) || ch == '%' || ch == '?' || ch == '#') out += percent(c);
        else out.push_back(ch);
    }
    return out;
}

std::vector<Triple> link_triples(const KgConfig& cfg, const OsmEntity& e, LinkReport* report) {
    std::vector<Triple> out;
    const auto subject = Term::iri(entity_iri(cfg, e));
    auto bad = [&] {
        if (report != nullptr) ++report->malformed;
    };
    if (const auto it = e.tags.find("wikidata"); it != e.tags.end()) {
        const auto qid = trim(it->second);
        if (valid_qid(qid)) {
            out.push_back({subject, Term::iri(cfg.ns.owl + "sameAs"),
                           Term::iri("https://www.wikidata.org/wiki/" + std::string(qid))});
        } else {
            bad();
        }
    }
    if (const auto it = e.tags.find("wikipedia"); it != e.tags.end()) {
        const std::string_view value = it->second;
        const auto colon = value.find(':');
        const auto lang = colon == std::string_view::npos ? std::string_view{} : trim(value.substr(0, colon));
        const auto title = colon == std::string_view::npos ? std::string_view{} : trim(value.substr(colon + 1));
        if (valid_language(lang) && !title.empty()) {
            const auto path = encode_title(title);
            const auto related = Term::iri(cfg.ns.dcterms + "related");
            out.push_back({subject, related, Term::iri("https://" + std::string(lang) + ".wikipedia.org/wiki/" + path)});
            out.push_back({subject, related, Term::iri("http://" + std::string(lang) + ".dbpedia.org/resource/" + path)});
        } else {
            bad();
        }
    }
    return out;
}

std::vector<Triple> entity_triples(const KgConfig& cfg, const OsmEntity& e, LinkReport* report) {
    const auto& ns = cfg.ns;
    const auto s = Term::iri(entity_iri(cfg, e));
    const auto type = Term::iri(ns.rdf + "type");
    const auto is_part_of = Term::iri(ns.dcterms + "isPartOf");
    const std::string xsd_double = ns.xsd + "double";

    std::vector<Triple> out;
    out.push_back({s, type, Term::iri(ns.geovec_s + "EmbeddedSpatialThing")});
    out.push_back({s, type, Term::iri(ns.lgd + std::string(lgd_class(e.kind)))});
    out.push_back({s, Term::iri(ns.geo + "longitude"), Term::literal(format_double(e.point.lon()), xsd_double)});
    out.push_back({s, Term::iri(ns.geo + "latitude"), Term::literal(format_double(e.point.lat()), xsd_double)});
    out.push_back({s, Term::iri(ns.dcterms + "identifier"), Term::literal(std::to_string(e.id), ns.xsd + "integer")});
    if (const auto it = e.tags.find("name"); it != e.tags.end()) {
        out.push_back({s, Term::iri(ns.rdfs + "label"), Term::literal(it->second)});
    }
    for (const auto* doi : {&cfg.doi_tags, &cfg.doi_nle}) {
        if (doi->has_value()) out.push_back({s, is_part_of, Term::iri("https://doi.org/" + **doi)});
    }
    auto links = link_triples(cfg, e, report);
    out.insert(out.end(), std::make_move_iterator(links.begin()), std::make_move_iterator(links.end()));
    out.push_back({s, Term::iri(ns.prov + "hadPrimarySource"),
                   Term::iri("https://www.openstreetmap.org/" + std::string(to_string(e.kind)) + "/" +
                             std::to_string(e.id))});
    out.push_back({s, Term::iri(ns.prov + "wasDerivedFrom"), Term::iri(collection_iri(cfg))});
    return out;
}

std::vector<Triple> collection_triples(const KgConfig& cfg) {
    const auto& ns = cfg.ns;
    const auto c = Term::iri(collection_iri(cfg));
    return {
        {c, Term::iri(ns.rdf + "type"), Term::iri(ns.prov + "Collection")},
        {c, Term::iri(ns.prov + "generatedAtTime"), Term::literal(cfg.generated_date, ns.xsd + "date")},
        {c, Term::iri(ns.owl + "versionInfo"), Term::literal(cfg.version_info)},
    };
}

std::vector<Triple> void_triples(const KgConfig& cfg, std::size_t entity_count) {
    const auto& ns = cfg.ns;
    const auto d = Term::iri(ns.geovec + cfg.version + "/dataset");
    return {
        {d, Term::iri(ns.rdf + "type"), Term::iri(ns.void_ + "Dataset")},
        {d, Term::iri(ns.dcterms + "title"), Term::literal("Embedded spatial entities " + cfg.version)},
        {d, Term::iri(ns.void_ + "uriSpace"), Term::literal(ns.geovec)},
        {d, Term::iri(ns.void_ + "feature"), Term::iri("http://www.w3.org/ns/formats/N-Triples")},
        {d, Term::iri(ns.void_ + "rootResource"), Term::iri(collection_iri(cfg))},
        {d, Term::iri(ns.void_ + "entities"), Term::literal(std::to_string(entity_count), ns.xsd + "integer")},
    };
}

std::vector<Triple> knowledge_graph(const KgConfig& cfg, std::span<const OsmEntity> entities, LinkReport* report) {
    validate(cfg);
    auto out = collection_triples(cfg);
    auto v = void_triples(cfg, entities.size());
    out.insert(out.end(), v.begin(), v.end());
    for (const auto& e : entities) {
        auto t = entity_triples(cfg, e, report);
        out.insert(out.end(), std::make_move_iterator(t.begin()), std::make_move_iterator(t.end()));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void write_ntriples(std::span<const Triple> triples, std::ostream& out) {
    for (const auto& t : triples) out << t.to_ntriples() << '\n';
}

}  // namespace geovec::kg
