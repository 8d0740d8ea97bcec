#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "geovec/types.hpp"

namespace geovec {

/// Pre-trained word vectors: lowercase token -> vector of dim() floats.
class WordVectorTable {
public:
    WordVectorTable() = default;
    explicit WordVectorTable(std::size_t dim) : dim_(dim) {}

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }

    /// Inserts or replaces; the token is lowercased. Returns false when it replaced an entry.
    /// Throws InvalidInput on a length mismatch or an empty token.
    bool insert(std::string_view token, std::span<const float> vector);

    /// nullptr when the token is out of vocabulary.
    [[nodiscard]] const float* find(std::string_view lowercase_token) const;

private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
    };

    std::size_t dim_ = 0;
    std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> rows_;
    std::vector<float> data_;
};

struct WordVectorReport {
    std::size_t duplicates = 0;
};

/// Text format: header "count dim", then `count` lines of a token followed by dim floats.
/// Duplicate tokens keep the last vector and are counted in the report.
/// Throws ParseError with the line number on any malformed or mis-sized line.
[[nodiscard]] WordVectorTable load_word_vectors(std::istream& in, WordVectorReport* report = nullptr);

/// ASCII-lowercases, splits on every ASCII non-alphanumeric byte, and averages the vectors of
/// in-vocabulary pieces. Bytes >= 0x80 count as word characters so UTF-8 words stay whole.
/// Returns the zero vector when nothing is in vocabulary.
[[nodiscard]] std::vector<double> token_embed(const WordVectorTable& table, std::string_view text);

/// Tokens produced by the token_embed splitting rule.
[[nodiscard]] std::vector<std::string> tokenize(std::string_view text);

/// Mean over tags of ft(key) + ft(value), scaled by 1 / (2 |tags|); zero for a tagless entity.
[[nodiscard]] std::vector<double> gvtags_encode(const OsmEntity& entity, const WordVectorTable& table);

}  // namespace geovec
