#include "geovec/tags.hpp"

#include <charconv>
#include <istream>

#include "geovec/error.hpp"

namespace geovec {

namespace {

bool is_word_byte(unsigned char c) noexcept {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

char lower(char c) noexcept { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string lowercase(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = lower(c);
    return out;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

bool WordVectorTable::insert(std::string_view token, std::span<const float> vector) {
    if (token.empty()) throw InvalidInput("empty word-vector token");
    if (vector.size() != dim_) throw InvalidInput("word vector has wrong dimension");
    auto key = lowercase(token);
    if (const auto it = rows_.find(key); it != rows_.end()) {
        std::copy(vector.begin(), vector.end(), data_.begin() + static_cast<std::ptrdiff_t>(it->second * dim_));
        return false;
    }
    rows_.emplace(std::move(key), rows_.size());
    data_.insert(data_.end(), vector.begin(), vector.end());
    return true;
}

const float* WordVectorTable::find(std::string_view lowercase_token) const {
    const auto it = rows_.find(lowercase_token);
    return it == rows_.end() ? nullptr : data_.data() + it->second * dim_;
}

WordVectorTable load_word_vectors(std::istream& in, WordVectorReport* report) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "missing word-vector header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_fields(line);
    std::size_t count = 0;
    std::size_t dim = 0;
    if (header.size() != 2 || !parse_number(header[0], count) || !parse_number(header[1], dim) || dim == 0) {
        throw ParseError(1, "header must be \"<count> <dim>\" with dim >= 1");
    }

    WordVectorTable table(dim);
    std::vector<float> row(dim);
    std::size_t duplicates = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t line_no = i + 2;
        if (!std::getline(in, line)) {
            throw ParseError(line_no, "expected " + std::to_string(count) + " vectors, file ends after " +
                                          std::to_string(i));
        }
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto fields = split_fields(line);
        if (fields.size() != dim + 1) {
            throw ParseError(line_no, "expected token and " + std::to_string(dim) + " values, found " +
                                          std::to_string(fields.empty() ? 0 : fields.size() - 1) + " values");
        }
        for (std::size_t d = 0; d < dim; ++d) {
            if (!parse_number(fields[d + 1], row[d])) {
                throw ParseError(line_no, "non-numeric value '" + std::string(fields[d + 1]) + "'");
            }
        }
        if (!table.insert(fields[0], row)) ++duplicates;
    }
    if (report != nullptr) report->duplicates = duplicates;
    return table;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (const char c : text) {
        if (is_word_byte(static_cast<unsigned char>(c))) {
            current.push_back(lower(c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::vector<double> token_embed(const WordVectorTable& table, std::string_view text) {
    std::vector<double> out(table.dim(), 0.0);
    std::size_t hits = 0;
    for (const auto& token : tokenize(text)) {
        const float* v = table.find(token);
        if (v == nullptr) continue;
        ++hits;
        for (std::size_t d = 0; d < out.size(); ++d) out[d] += static_cast<double>(v[d]);
    }
    if (hits > 1) {
        for (auto& x : out) x /= static_cast<double>(hits);
    }
    return out;
}

std::vector<double> gvtags_encode(const OsmEntity& entity, const WordVectorTable& table) {
    std::vector<double> out(table.dim(), 0.0);
    if (entity.tags.empty()) return out;
    for (const auto& [key, value] : entity.tags) {
        const auto k = token_embed(table, key);
        const auto v = token_embed(table, value);
        for (std::size_t d = 0; d < out.size(); ++d) out[d] += k[d] + v[d];
    }
    const double scale = 1.0 / (2.0 * static_cast<double>(entity.tags.size()));
    for (auto& x : out) x *= scale;
    return out;
}

}  // namespace geovec
