#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "geovec/nle_graph.hpp"
#include "geovec/spatial_index.hpp"
#include "geovec/types.hpp"

namespace geovec {

/// Number of training neighbors averaged when encoding an entity.
inline constexpr std::size_t kEncodeNeighbors = 50;
/// Distances below this are clamped before weighting, so coincident neighbors get ln(1001).
inline constexpr double kEncodeMinDistanceMeters = 0.001;

struct NleHyperparameters {
    std::uint32_t k = 50;
    std::uint32_t walks_per_node = 10;
    std::uint32_t walk_length = 80;
    std::uint32_t window = 10;
    std::uint32_t epochs = 5;
    std::uint32_t negatives = 5;
    std::uint64_t seed = 1;
    double learning_rate = 0.025;
    DampMode damp_mode = DampMode::capped;

    friend bool operator==(const NleHyperparameters&, const NleHyperparameters&) = default;
};

struct ModelEntity {
    EntityKind kind = EntityKind::node;
    std::uint64_t id = 0;
    GeoPoint point;

    friend bool operator==(const ModelEntity&, const ModelEntity&) = default;
};

/// Trained location-embedding table plus the spatial index used to encode unseen entities.
class NleModel {
public:
    /// vectors holds entities.size() rows of `dim` floats. Throws InvalidInput on shape mismatch
    /// or non-finite values.
    NleModel(std::size_t dim, NleHyperparameters hyper, std::vector<ModelEntity> entities, std::vector<float> vectors);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return entities_.size(); }
    [[nodiscard]] const NleHyperparameters& hyperparameters() const noexcept { return hyper_; }
    [[nodiscard]] const std::vector<ModelEntity>& entities() const noexcept { return entities_; }
    [[nodiscard]] std::span<const float> vector(std::size_t i) const noexcept {
        return {vectors_.data() + i * dim_, dim_};
    }
    [[nodiscard]] const std::vector<float>& vectors() const noexcept { return vectors_; }
    [[nodiscard]] const SpatialIndex& index() const noexcept { return index_; }

    /// Little-endian binary: "GVNLE1", dim, hyperparameters, entity count, then per entity
    /// kind byte, u64 id, f64 lat, f64 lon and dim f32 values.
    void save(std::ostream& out) const;
    /// Throws ParseError on a bad magic, truncation or invalid record.
    [[nodiscard]] static NleModel load(std::istream& in);

private:
    std::size_t dim_;
    NleHyperparameters hyper_;
    std::vector<ModelEntity> entities_;
    std::vector<float> vectors_;
    SpatialIndex index_;
};

/// Distance-weighted average of the vectors of the min(50, size) nearest training entities,
/// with weight ln(1 + 1/d) and d clamped below at 0.001 m. Throws InvalidInput on an empty model.
[[nodiscard]] std::vector<double> nle_encode(const NleModel& model, const GeoPoint& p);

struct TrainReport {
    std::size_t edges = 0;  // undirected
    std::size_t walks = 0;
    std::vector<double> epoch_loss;
};

struct TrainOptions {
    std::size_t dim = 128;
    NleHyperparameters hyper;
    std::size_t threads = 1;
    bool parallel_training = false;
};

/// Full training phase: k-NN graph, weighted walks, skip-gram. Throws InvalidInput for fewer
/// than two training entities.
[[nodiscard]] NleModel train_nle(std::span<const OsmEntity> training, const TrainOptions& options,
                                 TrainReport* report = nullptr);

}  // namespace geovec
