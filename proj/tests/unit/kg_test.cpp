#include <doctest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "geovec/error.hpp"
#include "geovec/kg.hpp"
#include "ntriples.hpp"

using namespace geovec;
using namespace geovec::kg;

namespace {

const KgConfig cfg;

OsmEntity entity(EntityKind kind, std::uint64_t id, TagSet tags = {}) { return {id, kind, std::move(tags), {1.5, -2.25}}; }

std::string document(std::span<const Triple> triples) {
    std::ostringstream out;
    write_ntriples(triples, out);
    return out.str();
}

std::vector<std::string> objects(const std::vector<Triple>& ts, const std::string& predicate) {
    std::vector<std::string> out;
    for (const auto& t : ts) {
        if (t.predicate.value == predicate) out.push_back(t.object.value);
    }
    return out;
}

const std::string related = cfg.ns.dcterms + "related";
const std::string same_as = cfg.ns.owl + "sameAs";

}  // namespace

TEST_CASE("entity IRIs") {
    CHECK(entity_iri(cfg, entity(EntityKind::node, 240109189)) ==
          "http://geovectors.l3s.uni-hannover.de/resource/v2_n_240109189");
    CHECK(entity_iri(cfg, entity(EntityKind::way, 42)).ends_with("/v2_w_42"));
    KgConfig v1 = cfg;
    v1.version = "v1";
    CHECK(entity_iri(v1, entity(EntityKind::relation, 9)).ends_with("/v1_r_9"));
    CHECK(collection_iri(cfg) == "http://geovectors.l3s.uni-hannover.de/resource/v2/collection");
}

TEST_CASE("version labels and validation") {
    for (const auto* ok : {"v1", "v2", "v10", "v0"}) CHECK(valid_version_label(ok));
    for (const auto* bad : {"", "v", "2", "V2", "v2a", "v-1", " v2"}) CHECK_FALSE(valid_version_label(bad));
    KgConfig c = cfg;
    c.version = "x";
    CHECK_THROWS_AS(validate(c), InvalidInput);
    CHECK_THROWS_AS((void)knowledge_graph(c, {}), InvalidInput);
    c = cfg;
    c.generated_date = "10.11.2020";
    CHECK_THROWS_AS(validate(c), InvalidInput);
    CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("identity links") {
    LinkReport report;
    const auto e = entity(EntityKind::node, 1, {{"wikidata", "Q64"}, {"wikipedia", "de:Berlin"}});
    const auto links = link_triples(cfg, e, &report);
    CHECK(report.malformed == 0);
    CHECK(objects(links, same_as) == std::vector<std::string>{"https://www.wikidata.org/wiki/Q64"});
    const auto rel = objects(links, related);
    CHECK(rel == std::vector<std::string>{"https://de.wikipedia.org/wiki/Berlin", "http://de.dbpedia.org/resource/Berlin"});
}

TEST_CASE("wikipedia titles are encoded") {
    const auto e = entity(EntityKind::way, 2, {{"wikipedia", "en:Gare du Nord"}});
    CHECK(objects(link_triples(cfg, e), related).front() == "https://en.wikipedia.org/wiki/Gare_du_Nord");
    CHECK(encode_title("100% \"pure\"?") == "100%25_%22pure%22%3F");
    CHECK(encode_title("Köln") == "Köln");
    CHECK(encode_title("a#b") == "a%23b");
}

TEST_CASE("malformed link tags are skipped and counted") {
    LinkReport report;
    const auto e = entity(EntityKind::node, 3, {{"wikidata", "64"}, {"wikipedia", "Berlin"}});
    CHECK(link_triples(cfg, e, &report).empty());
    CHECK(report.malformed == 2);
    const auto f = entity(EntityKind::node, 4, {{"wikipedia", "DE:Berlin"}, {"wikidata", "Q"}});
    CHECK(link_triples(cfg, f, &report).empty());
    CHECK(report.malformed == 4);
    CHECK(link_triples(cfg, entity(EntityKind::node, 5, {{"wikipedia", " en : Title "}}), &report).size() == 2);
    CHECK(report.malformed == 4);
}

TEST_CASE("entity skeleton") {
    const auto plain = entity(EntityKind::relation, 77);
    const auto ts = entity_triples(cfg, plain);
    CHECK(ts.size() == 9);
    CHECK(objects(ts, cfg.ns.rdfs + "label").empty());
    CHECK(objects(ts, cfg.ns.rdf + "type") ==
          std::vector<std::string>{cfg.ns.geovec_s + "EmbeddedSpatialThing", cfg.ns.lgd + "Relation"});
    CHECK(objects(ts, cfg.ns.dcterms + "isPartOf") ==
          std::vector<std::string>{"https://doi.org/10.5281/zenodo.4321406", "https://doi.org/10.5281/zenodo.4323008"});
    CHECK(objects(ts, cfg.ns.prov + "hadPrimarySource") ==
          std::vector<std::string>{"https://www.openstreetmap.org/relation/77"});
    CHECK(objects(ts, cfg.ns.geo + "latitude") == std::vector<std::string>{"1.5"});
    CHECK(objects(ts, cfg.ns.geo + "longitude") == std::vector<std::string>{"-2.25"});

    KgConfig one = cfg;
    one.doi_nle.reset();
    CHECK(entity_triples(one, plain).size() == 8);

    const auto named = entity_triples(cfg, entity(EntityKind::node, 1, {{"name", "Rue \"A\"\n"}}));
    CHECK(named.size() == 10);
    CHECK(objects(named, cfg.ns.rdfs + "label") == std::vector<std::string>{"Rue \"A\"\n"});
}

TEST_CASE("collection statements") {
    KgConfig c = cfg;
    c.version_info = "release 2.0 (beta)";
    const auto ts = collection_triples(c);
    REQUIRE(ts.size() == 3);
    CHECK(objects(ts, c.ns.owl + "versionInfo") == std::vector<std::string>{"release 2.0 (beta)"});
    CHECK(objects(ts, c.ns.prov + "generatedAtTime") == std::vector<std::string>{"2020-11-10"});
}

TEST_CASE("graph is valid N-Triples and matches the terms") {
    const std::vector<OsmEntity> es = {
        entity(EntityKind::node, 240109189, {{"name", "Berlin"}, {"wikidata", "Q64"}, {"wikipedia", "de:Berlin"}}),
        entity(EntityKind::way, 5, {{"name", "tab\there \\ \x01"}, {"wikipedia", "fr:Élysée Palace"}}),
        entity(EntityKind::relation, 6, {{"amenity", "cafe"}})};
    const auto graph = knowledge_graph(cfg, es);
    const auto text = document(graph);
    const auto parsed = nt::parse(text);
    CHECK(parsed.errors.empty());
    REQUIRE(parsed.statements.size() == graph.size());
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(graph.size()));
    for (std::size_t i = 0; i < graph.size(); ++i) {
        CHECK(parsed.statements[i].s.value == graph[i].subject.value);
        CHECK(parsed.statements[i].p.value == graph[i].predicate.value);
        CHECK(parsed.statements[i].o.value == graph[i].object.value);
    }
    CHECK(std::is_sorted(graph.begin(), graph.end()));
    CHECK(std::adjacent_find(graph.begin(), graph.end()) == graph.end());

    std::map<std::string, int> lgd_types;
    for (const auto& t : graph) {
        if (t.predicate.value == cfg.ns.rdf + "type" && t.object.value.starts_with(cfg.ns.lgd)) ++lgd_types[t.subject.value];
    }
    CHECK(lgd_types.size() == 3);
    for (const auto& [s, n] : lgd_types) CHECK(n == 1);
}

TEST_CASE("graph does not depend on entity order") {
    std::vector<OsmEntity> es;
    for (std::uint64_t i = 0; i < 30; ++i) {
        es.push_back(entity(static_cast<EntityKind>(i % 3), i, {{"name", "n" + std::to_string(i % 4)}}));
    }
    auto reversed = es;
    std::reverse(reversed.begin(), reversed.end());
    CHECK(document(knowledge_graph(cfg, es)) == document(knowledge_graph(cfg, reversed)));
}

TEST_CASE("empty snapshot gives collection and dataset description only") {
    const auto graph = knowledge_graph(cfg, {});
    CHECK(graph.size() == 3 + 6);
    CHECK(nt::parse(document(graph)).errors.empty());
    const auto count = objects(graph, cfg.ns.void_ + "entities");
    CHECK(count == std::vector<std::string>{"0"});
}
