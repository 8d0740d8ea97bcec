#include "geovec/emb_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "geovec/error.hpp"

namespace geovec {

std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return {buf.data(), ptr};
}

std::optional<double> parse_double(std::string_view text) noexcept {
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            cells.push_back(line.substr(start));
            return cells;
        }
        cells.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

void write_tsv(std::span<const EmbeddingRecord> records, std::ostream& out, std::optional<std::size_t> dim) {
    const std::size_t d = records.empty() ? dim.value_or(0) : records.front().vector.size();
    if (dim && *dim != d) throw InvalidInput("embedding records do not have the requested dimension");
    for (const auto& r : records) {
        if (r.vector.size() != d) throw InvalidInput("embedding records have mixed dimensions");
        for (const double x : r.vector) {
            if (!std::isfinite(x)) throw InvalidInput("non-finite embedding value for id " + std::to_string(r.id));
        }
    }
    std::string line = "kind\tid";
    for (std::size_t i = 0; i < d; ++i) line += "\tv" + std::to_string(i);
    line += '\n';
    out << line;
    for (const auto& r : records) {
        line.assign(to_string(r.kind));
        line += '\t';
        line += std::to_string(r.id);
        for (const double x : r.vector) {
            line += '\t';
            line += format_double(x);
        }
        line += '\n';
        out << line;
    }
}

std::vector<EmbeddingRecord> read_tsv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "missing TSV header");
    const auto header = split_tabs(line);
    if (header.size() < 2 || header[0] != "kind" || header[1] != "id") {
        throw ParseError(1, "header must start with kind\\tid");
    }
    const std::size_t dim = header.size() - 2;
    for (std::size_t i = 0; i < dim; ++i) {
        if (header[i + 2] != "v" + std::to_string(i)) throw ParseError(1, "unexpected header column '" + std::string(header[i + 2]) + "'");
    }

    std::vector<EmbeddingRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_tabs(line);
        if (cells.size() != dim + 2) {
            throw ParseError(line_no, "row has " + std::to_string(cells.size()) + " cells, expected " +
                                          std::to_string(dim + 2));
        }
        EmbeddingRecord r;
        const auto kind = parse_kind(cells[0]);
        if (!kind) throw ParseError(line_no, "bad kind '" + std::string(cells[0]) + "'");
        r.kind = *kind;
        const auto [ptr, ec] = std::from_chars(cells[1].data(), cells[1].data() + cells[1].size(), r.id);
        if (ec != std::errc() || ptr != cells[1].data() + cells[1].size() || cells[1].empty()) {
            throw ParseError(line_no, "bad id '" + std::string(cells[1]) + "'");
        }
        r.vector.reserve(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            const auto v = parse_double(cells[i + 2]);
            if (!v || !std::isfinite(*v)) throw ParseError(line_no, "non-numeric cell '" + std::string(cells[i + 2]) + "'");
            r.vector.push_back(*v);
        }
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace geovec
