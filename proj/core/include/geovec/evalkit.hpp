#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "geovec/types.hpp"

namespace geovec::eval {

enum class Split : std::uint8_t { train, test };

struct LabeledExample {
    Split split = Split::train;
    std::string label;
    OsmEntity entity;
};

struct LabeledRecord {
    Split split = Split::train;
    std::string label;
    EntityKind kind = EntityKind::node;
    std::uint64_t id = 0;
    std::vector<double> vector;

    friend bool operator==(const LabeledRecord&, const LabeledRecord&) = default;
};

using LabeledDataset = std::vector<LabeledRecord>;

/// Fraction of each balanced class assigned to the training split.
inline constexpr double kTrainFraction = 0.8;

/// Drops classes under min_count, randomly under-samples the rest to the smallest remaining
/// class, and assigns round(0.8 m) records of each class to train. Classes are visited in label
/// order and each draws from a stream keyed by its label. Throws InvalidInput if no class survives.
[[nodiscard]] std::vector<LabeledExample> balance_and_split(std::map<std::string, std::vector<OsmEntity>> by_label,
                                                            std::size_t min_count, std::uint64_t seed);

/// Country-of-origin examples: each snapshot is sampled on its own (linked first, then tagged,
/// then the rest, up to samples_per_country; linked entities beyond that are thinned uniformly)
/// and labeled with its name.
[[nodiscard]] std::vector<LabeledExample> build_country_examples(std::span<const Snapshot> snapshots,
                                                                 std::size_t samples_per_country,
                                                                 std::size_t min_count, std::uint64_t seed);

using ClassMap = std::map<std::string, std::string, std::less<>>;  // QID -> class label

/// Two-column `QID\tlabel` TSV; blank lines, '#' comments and a leading "QID" header are skipped.
[[nodiscard]] ClassMap load_class_map(std::istream& in);

/// Type-assertion examples: entities whose wikidata tag is a key of class_map.
[[nodiscard]] std::vector<LabeledExample> build_type_examples(std::span<const OsmEntity> entities,
                                                              const ClassMap& class_map, std::size_t min_count,
                                                              std::uint64_t seed);

using Encoder = std::function<std::vector<double>(const OsmEntity&)>;

[[nodiscard]] LabeledDataset encode_examples(std::span<const LabeledExample> examples, const Encoder& encode,
                                             std::size_t threads = 1);

[[nodiscard]] LabeledDataset build_country_dataset(std::span<const Snapshot> snapshots,
                                                   std::size_t samples_per_country, std::size_t min_count,
                                                   std::uint64_t seed, const Encoder& encode);
[[nodiscard]] LabeledDataset build_type_dataset(std::span<const OsmEntity> entities, const ClassMap& class_map,
                                                std::size_t min_count, std::uint64_t seed, const Encoder& encode);

/// Header `split\tlabel\tkind\tid\tv0..`, one row per record.
void write_dataset_tsv(const LabeledDataset& ds, std::ostream& out);
/// Throws ParseError with the line number on malformed rows.
[[nodiscard]] LabeledDataset read_dataset_tsv(std::istream& in);

/// Macro averages over the union of gold and predicted labels; all values are fractions in [0, 1].
struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
};

/// Per-class precision and recall with 0/0 taken as 0; macro F1 is the mean of per-class F1.
/// Throws std::invalid_argument on length mismatch or empty input.
[[nodiscard]] Metrics metrics(std::span<const std::string> predicted, std::span<const std::string> gold);

struct Classification {
    std::vector<std::string> predicted;
    std::vector<std::string> gold;
    Metrics metrics;
};

/// Majority vote among the k nearest training vectors (Euclidean). Vote ties go to the label
/// with the smaller summed distance, then to the smaller label. Throws InvalidInput for empty
/// splits or k larger than the training split, std::invalid_argument for k = 0.
[[nodiscard]] Classification knn_classify(const LabeledDataset& ds, std::size_t k = 1, std::size_t threads = 1);

}  // namespace geovec::eval
