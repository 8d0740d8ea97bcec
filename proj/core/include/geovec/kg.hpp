#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geovec/types.hpp"

namespace geovec::kg {

/// An RDF term: an IRI, or a literal with an optional datatype IRI or language tag.
struct Term {
    enum class Type : std::uint8_t { iri, literal };

    Type type = Type::iri;
    std::string value;     // IRI or lexical form
    std::string datatype;  // literals only; empty for plain strings
    std::string language;  // literals only

    [[nodiscard]] static Term iri(std::string v) { return {Type::iri, std::move(v), {}, {}}; }
    [[nodiscard]] static Term literal(std::string lexical, std::string datatype = {}) {
        return {Type::literal, std::move(lexical), std::move(datatype), {}};
    }

    /// N-Triples form: <iri>, "lex", "lex"^^<dt> or "lex"@lang.
    [[nodiscard]] std::string to_ntriples() const;

    friend auto operator<=>(const Term&, const Term&) = default;
};

struct Triple {
    Term subject;
    Term predicate;
    Term object;

    /// One N-Triples statement without the trailing newline.
    [[nodiscard]] std::string to_ntriples() const;

    friend auto operator<=>(const Triple&, const Triple&) = default;
};

/// Vocabulary namespaces. geovec / geovec_s have no published IRIs, so they are configurable.
struct Namespaces {
    std::string geovec = "http://geovectors.l3s.uni-hannover.de/resource/";
    std::string geovec_s = "http://geovectors.l3s.uni-hannover.de/schema/";
    std::string lgd = "http://linkedgeodata.org/ontology/";
    std::string geo = "http://www.w3.org/2003/01/geo/wgs84_pos#";
    std::string dcterms = "http://purl.org/dc/terms/";
    std::string owl = "http://www.w3.org/2002/07/owl#";
    std::string prov = "http://www.w3.org/ns/prov#";
    std::string rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
    std::string rdfs = "http://www.w3.org/2000/01/rdf-schema#";
    std::string xsd = "http://www.w3.org/2001/XMLSchema#";
    std::string void_ = "http://rdfs.org/ns/void#";
};

struct KgConfig {
    std::string version = "v2";
    std::optional<std::string> doi_tags = "10.5281/zenodo.4321406";
    std::optional<std::string> doi_nle = "10.5281/zenodo.4323008";
    std::string generated_date = "2020-11-10";  // xsd:date
    std::string version_info = "1.0";
    Namespaces ns;
};

/// True when the label matches v[0-9]+.
[[nodiscard]] bool valid_version_label(std::string_view label) noexcept;
/// Throws InvalidInput for a bad version label or a date that is not YYYY-MM-DD.
void validate(const KgConfig& cfg);

/// {geovec}{version}_{n|w|r}_{id}
[[nodiscard]] std::string entity_iri(const KgConfig& cfg, const OsmEntity& e);
/// {geovec}{version}/collection
[[nodiscard]] std::string collection_iri(const KgConfig& cfg);

struct LinkReport {
    std::size_t malformed = 0;  // wikidata / wikipedia tags that could not be turned into links
};

/// Percent-encodes bytes that may not appear in an IRI path (after spaces became underscores).
[[nodiscard]] std::string encode_title(std::string_view title);

/// owl:sameAs to the Wikidata page for wikidata=Q..., and dcterms:related to the Wikipedia article
/// and DBpedia resource for wikipedia=LANG:Title. Unusable tag values are skipped and counted.
[[nodiscard]] std::vector<Triple> link_triples(const KgConfig& cfg, const OsmEntity& e, LinkReport* report = nullptr);

/// Every statement describing one embedded entity, links included.
[[nodiscard]] std::vector<Triple> entity_triples(const KgConfig& cfg, const OsmEntity& e,
                                                 LinkReport* report = nullptr);

/// The release's prov:Collection with its generation date and version string.
[[nodiscard]] std::vector<Triple> collection_triples(const KgConfig& cfg);

/// Minimal VoID description of the release.
[[nodiscard]] std::vector<Triple> void_triples(const KgConfig& cfg, std::size_t entity_count);

/// Collection, VoID and entity statements, sorted and de-duplicated.
[[nodiscard]] std::vector<Triple> knowledge_graph(const KgConfig& cfg, std::span<const OsmEntity> entities,
                                                  LinkReport* report = nullptr);

/// One statement per line (LF), in the given order.
void write_ntriples(std::span<const Triple> triples, std::ostream& out);

}  // namespace geovec::kg
