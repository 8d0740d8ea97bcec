#include "ntriples.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace nt {

namespace {

std::string utf8(unsigned long cp) {
    std::string out;
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
    return out;
}

struct Cursor {
    std::string_view line;
    std::size_t pos = 0;
    std::string error;

    bool done() const { return pos >= line.size(); }
    char peek() const { return done() ? '\0' : line[pos]; }
    void skip_ws() {
        while (!done() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    }
    bool fail(std::string msg) {
        if (error.empty()) error = std::move(msg) + " at column " + std::to_string(pos + 1);
        return false;
    }

    bool uchar(std::string& out) {
        // pos is at 'u' or 'U'
        const std::size_t width = line[pos] == 'u' ? 4 : 8;
        ++pos;
        if (pos + width > line.size()) return fail("short \\u escape");
        unsigned long cp = 0;
        for (std::size_t i = 0; i < width; ++i) {
            const char c = line[pos + i];
            if (!std::isxdigit(static_cast<unsigned char>(c))) return fail("bad hex digit in escape");
            cp = cp * 16 + static_cast<unsigned long>(std::isdigit(static_cast<unsigned char>(c)) ? c - '0'
                                                                                              : (std::tolower(c) - 'a' + 10));
        }
        pos += width;
        out += utf8(cp);
        return true;
    }

    bool iriref(std::string& out) {
        if (peek() != '<') return fail("expected '<'");
        ++pos;
        while (true) {
            if (done()) return fail("unterminated IRI");
            const auto c = static_cast<unsigned char>(line[pos]);
            if (c == '>') {
                ++pos;
                break;
            }
            if (c == '\\') {
                ++pos;
                if (peek() != 'u' && peek() != 'U') return fail("only \\u escapes are allowed in IRIs");
                if (!uchar(out)) return false;
                continue;
            }
            if (c <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' || c == '`') {
                return fail("character not allowed in IRI");
            }
            out.push_back(static_cast<char>(c));
            ++pos;
        }
        // IRIREF must be absolute: scheme ":" ...
        const auto colon = out.find(':');
        if (colon == std::string::npos || colon == 0 || !std::isalpha(static_cast<unsigned char>(out[0]))) {
            return fail("relative IRI");
        }
        for (std::size_t i = 1; i < colon; ++i) {
            const char c = out[i];
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') return fail("bad IRI scheme");
        }
        return true;
    }

    bool blank(std::string& out) {
        if (line.substr(pos, 2) != "_:") return fail("expected blank node");
        pos += 2;
        const std::size_t start = pos;
        while (!done() && (std::isalnum(static_cast<unsigned char>(line[pos])) || line[pos] == '_' || line[pos] == '-' ||
                           line[pos] == '.')) {
            ++pos;
        }
        if (pos == start) return fail("empty blank node label");
        if (line[pos - 1] == '.') --pos;
        out = std::string(line.substr(start, pos - start));
        return true;
    }

    bool literal(Node& n) {
        ++pos;  // opening quote
        while (true) {
            if (done()) return fail("unterminated literal");
            const char c = line[pos];
            if (c == '"') {
                ++pos;
                break;
            }
            if (c == '\n' || c == '\r') return fail("raw line break in literal");
            if (c == '\\') {
                ++pos;
                if (done()) return fail("dangling backslash");
                const char e = line[pos];
                switch (e) {
                    case 't': n.value += '\t'; break;
                    case 'b': n.value += '\b'; break;
                    case 'n': n.value += '\n'; break;
                    case 'r': n.value += '\r'; break;
                    case 'f': n.value += '\f'; break;
                    case '"': n.value += '"'; break;
                    case '\'': n.value += '\''; break;
                    case '\\': n.value += '\\'; break;
                    case 'u':
                    case 'U':
                        if (!uchar(n.value)) return false;
                        continue;
                    default:
                        return fail("unknown escape");
                }
                ++pos;
                continue;
            }
            n.value.push_back(c);
            ++pos;
        }
        if (line.substr(pos, 2) == "^^") {
            pos += 2;
            return iriref(n.datatype);
        }
        if (peek() == '@') {
            ++pos;
            const std::size_t start = pos;
            while (!done() && std::isalpha(static_cast<unsigned char>(line[pos]))) ++pos;
            if (pos == start) return fail("empty language tag");
            while (!done() && line[pos] == '-') {
                ++pos;
                const std::size_t sub = pos;
                while (!done() && std::isalnum(static_cast<unsigned char>(line[pos]))) ++pos;
                if (pos == sub) return fail("empty language subtag");
            }
            n.language = std::string(line.substr(start, pos - start));
            n.datatype = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
            return true;
        }
        n.datatype = std::string(kXsd) + "string";
        return true;
    }

    bool term(Node& n, bool allow_literal, bool allow_blank) {
        const char c = peek();
        if (c == '<') {
            n.kind = Node::iri;
            return iriref(n.value);
        }
        if (c == '_' && allow_blank) {
            n.kind = Node::blank;
            return blank(n.value);
        }
        if (c == '"' && allow_literal) {
            n.kind = Node::literal;
            return literal(n);
        }
        return fail("unexpected term");
    }
};

}  // namespace

Result parse(std::string_view document) {
    Result r;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= document.size()) {
        const auto nl = document.find('\n', start);
        std::string_view line = document.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        start = nl == std::string_view::npos ? document.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        Cursor c{line};
        c.skip_ws();
        if (c.done() || c.peek() == '#') continue;
        Statement st;
        bool ok = c.term(st.s, false, true);
        if (ok) {
            c.skip_ws();
            ok = c.term(st.p, false, false);
        }
        if (ok) {
            c.skip_ws();
            ok = c.term(st.o, true, true);
        }
        if (ok) {
            c.skip_ws();
            if (c.peek() != '.') ok = c.fail("expected '.'");
            else ++c.pos;
        }
        if (ok) {
            c.skip_ws();
            if (!c.done() && c.peek() != '#') ok = c.fail("trailing content");
        }
        if (ok) r.statements.push_back(std::move(st));
        else r.errors.push_back("line " + std::to_string(line_no) + ": " + c.error);
    }
    return r;
}

Node canonical(Node n) {
    if (n.kind != Node::literal) return n;
    const std::string xsd(kXsd);
    if (n.datatype == xsd + "double") {
        char* end = nullptr;
        const double v = std::strtod(n.value.c_str(), &end);
        if (end != nullptr && *end == '\0') {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            n.value = buf;
        }
    } else if (n.datatype == xsd + "integer") {
        std::string digits = n.value;
        bool negative = false;
        if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) {
            negative = digits[0] == '-';
            digits.erase(0, 1);
        }
        const auto nz = digits.find_first_not_of('0');
        digits = nz == std::string::npos ? "0" : digits.substr(nz);
        n.value = (negative && digits != "0" ? "-" : "") + digits;
    }
    return n;
}

std::set<Statement> canonical_set(const std::vector<Statement>& statements) {
    std::set<Statement> out;
    for (const auto& s : statements) out.insert({canonical(s.s), canonical(s.p), canonical(s.o)});
    return out;
}

}  // namespace nt
