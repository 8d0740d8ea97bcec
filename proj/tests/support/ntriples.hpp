#pragma once

// Standalone N-Triples reader used to check emitted files. It follows the W3C grammar
// directly and shares no code with the library's serializer.

#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace nt {

struct Node {
    enum Kind { iri, blank, literal } kind = iri;
    std::string value;     // unescaped IRI, label or lexical form
    std::string datatype;  // literal datatype IRI; xsd:string when absent and untagged
    std::string language;

    friend auto operator<=>(const Node&, const Node&) = default;
};

struct Statement {
    Node s, p, o;
    friend auto operator<=>(const Statement&, const Statement&) = default;
};

struct Result {
    std::vector<Statement> statements;
    std::vector<std::string> errors;  // "line N: message"
};

Result parse(std::string_view document);

// Lexical forms rewritten to a canonical spelling: doubles via strtod, integers without
// leading zeros or a plus sign. Other literals are left alone.
Node canonical(Node n);
std::set<Statement> canonical_set(const std::vector<Statement>& statements);

inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";

}  // namespace nt
