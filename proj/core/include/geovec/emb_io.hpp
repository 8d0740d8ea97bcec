#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geovec/types.hpp"

namespace geovec {

struct EmbeddingRecord {
    EntityKind kind = EntityKind::node;
    std::uint64_t id = 0;
    std::vector<double> vector;

    friend bool operator==(const EmbeddingRecord&, const EmbeddingRecord&) = default;
};

/// Shortest decimal string that parses back to the same double.
[[nodiscard]] std::string format_double(double value);
/// Strict full-string parse; nullopt on any trailing garbage.
[[nodiscard]] std::optional<double> parse_double(std::string_view text) noexcept;

/// Header `kind\tid\tv0..v{d-1}` then one row per record, LF endings, shortest round-trip floats.
/// `dim` fixes the header width for an empty record list; otherwise it is taken from the records.
/// Throws InvalidInput before writing anything when dimensions are mixed or differ from `dim`, or a
/// value is non-finite.
void write_tsv(std::span<const EmbeddingRecord> records, std::ostream& out, std::optional<std::size_t> dim = {});

/// Inverse of write_tsv. Throws ParseError naming the line of a bad kind, cell or ragged row.
[[nodiscard]] std::vector<EmbeddingRecord> read_tsv(std::istream& in);

/// Splits on tabs without collapsing empty cells.
[[nodiscard]] std::vector<std::string_view> split_tabs(std::string_view line);

}  // namespace geovec
