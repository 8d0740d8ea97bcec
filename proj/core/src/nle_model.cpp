#include "geovec/nle_model.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <string_view>

#include "geovec/error.hpp"
#include "geovec/skipgram.hpp"

namespace geovec {

namespace {

constexpr std::string_view kMagic = "GVNLE1";

std::vector<GeoPoint> points_of(const std::vector<ModelEntity>& entities) {
    std::vector<GeoPoint> points;
    points.reserve(entities.size());
    for (const auto& e : entities) points.push_back(e.point);
    return points;
}

class LeWriter {
public:
    explicit LeWriter(std::ostream& out) : out_(out) {}

    template <typename U>
    void uint(U value) {
        std::array<char, sizeof(U)> bytes{};
        for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
        out_.write(bytes.data(), bytes.size());
    }
    void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }
    void f32(float v) { uint(std::bit_cast<std::uint32_t>(v)); }

private:
    std::ostream& out_;
};

class LeReader {
public:
    explicit LeReader(std::istream& in) : in_(in) {}

    template <typename U>
    U uint() {
        std::array<unsigned char, sizeof(U)> bytes{};
        in_.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
        if (in_.gcount() != static_cast<std::streamsize>(bytes.size())) throw ParseError(0, "truncated NLE model file");
        U value = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
        return value;
    }
    double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }
    float f32() { return std::bit_cast<float>(uint<std::uint32_t>()); }

private:
    std::istream& in_;
};

}  // namespace

NleModel::NleModel(std::size_t dim, NleHyperparameters hyper, std::vector<ModelEntity> entities,
                   std::vector<float> vectors)
    : dim_(dim), hyper_(hyper), entities_(std::move(entities)), vectors_(std::move(vectors)) {
    if (dim_ == 0) throw InvalidInput("model dimension must be at least 1");
    if (vectors_.size() != entities_.size() * dim_) throw InvalidInput("model vector table does not match entity count");
    if (!std::all_of(vectors_.begin(), vectors_.end(), [](float x) { return std::isfinite(x); })) {
        throw InvalidInput("model contains non-finite vector components");
    }
    index_ = SpatialIndex(points_of(entities_));
}

void NleModel::save(std::ostream& out) const {
    out.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
    LeWriter w(out);
    w.uint(static_cast<std::uint32_t>(dim_));
    w.uint(hyper_.k);
    w.uint(hyper_.walks_per_node);
    w.uint(hyper_.walk_length);
    w.uint(hyper_.window);
    w.uint(hyper_.epochs);
    w.uint(hyper_.negatives);
    w.uint(hyper_.seed);
    w.f64(hyper_.learning_rate);
    w.uint(static_cast<std::uint8_t>(hyper_.damp_mode));
    w.uint(static_cast<std::uint64_t>(entities_.size()));
    for (std::size_t i = 0; i < entities_.size(); ++i) {
        const auto& e = entities_[i];
        w.uint(static_cast<std::uint8_t>(e.kind));
        w.uint(e.id);
        w.f64(e.point.lat());
        w.f64(e.point.lon());
        for (const float x : vector(i)) w.f32(x);
    }
    if (!out) throw Error("failed writing NLE model");
}

NleModel NleModel::load(std::istream& in) {
    std::array<char, kMagic.size()> magic{};
    in.read(magic.data(), magic.size());
    if (in.gcount() != static_cast<std::streamsize>(magic.size()) ||
        std::string_view(magic.data(), magic.size()) != kMagic) {
        throw ParseError(0, "not an NLE model file (bad magic)");
    }
    LeReader r(in);
    const auto dim = r.uint<std::uint32_t>();
    NleHyperparameters hyper;
    hyper.k = r.uint<std::uint32_t>();
    hyper.walks_per_node = r.uint<std::uint32_t>();
    hyper.walk_length = r.uint<std::uint32_t>();
    hyper.window = r.uint<std::uint32_t>();
    hyper.epochs = r.uint<std::uint32_t>();
    hyper.negatives = r.uint<std::uint32_t>();
    hyper.seed = r.uint<std::uint64_t>();
    hyper.learning_rate = r.f64();
    const auto mode = r.uint<std::uint8_t>();
    if (mode > 1) throw ParseError(0, "unknown damping mode in NLE model");
    hyper.damp_mode = static_cast<DampMode>(mode);
    const auto count = r.uint<std::uint64_t>();
    if (dim == 0) throw ParseError(0, "NLE model has dimension 0");

    std::vector<ModelEntity> entities;
    std::vector<float> vectors;
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto kind = r.uint<std::uint8_t>();
        if (kind > 2) throw ParseError(0, "invalid entity kind in NLE model record " + std::to_string(i));
        ModelEntity e;
        e.kind = static_cast<EntityKind>(kind);
        e.id = r.uint<std::uint64_t>();
        const double lat = r.f64();
        const double lon = r.f64();
        if (!GeoPoint::valid(lat, lon)) throw ParseError(0, "invalid coordinate in NLE model record " + std::to_string(i));
        e.point = GeoPoint(lat, lon);
        entities.push_back(e);
        for (std::uint32_t d = 0; d < dim; ++d) vectors.push_back(r.f32());
    }
    return NleModel(dim, hyper, std::move(entities), std::move(vectors));
}

std::vector<double> nle_encode(const NleModel& model, const GeoPoint& p) {
    if (model.size() == 0) throw InvalidInput("cannot encode with an empty NLE model");
    const auto neighbors = model.index().knn(p, kEncodeNeighbors);
    std::vector<double> acc(model.dim(), 0.0);
    double weight_sum = 0.0;
    for (const auto& nb : neighbors) {
        const double w = std::log1p(1.0 / std::max(nb.meters, kEncodeMinDistanceMeters));
        weight_sum += w;
        const auto v = model.vector(nb.index);
        for (std::size_t d = 0; d < acc.size(); ++d) acc[d] += w * static_cast<double>(v[d]);
    }
    for (auto& x : acc) x /= weight_sum;
    return acc;
}

NleModel train_nle(std::span<const OsmEntity> training, const TrainOptions& options, TrainReport* report) {
    if (training.size() < 2) throw InvalidInput("training needs at least two entities");
    std::vector<GeoPoint> points;
    std::vector<ModelEntity> entities;
    points.reserve(training.size());
    for (const auto& e : training) {
        points.push_back(e.point);
        entities.push_back({e.kind, e.id, e.point});
    }
    const auto& hp = options.hyper;
    const auto graph = build_graph(points, hp.k, hp.damp_mode, options.threads);
    const auto walks = random_walks(graph, hp.walks_per_node, hp.walk_length, hp.seed, options.threads);

    SkipGramConfig sg;
    sg.dim = options.dim;
    sg.window = hp.window;
    sg.epochs = hp.epochs;
    sg.negatives = hp.negatives;
    sg.learning_rate = hp.learning_rate;
    sg.seed = hp.seed;
    sg.parallel = options.parallel_training;
    sg.threads = options.threads;
    auto trained = train_skipgram(walks, points.size(), sg);

    if (report != nullptr) {
        report->edges = 0;
        for (const auto& adj : graph.adjacency) report->edges += adj.size();
        report->edges /= 2;
        report->walks = walks.walk_count();
        report->epoch_loss = trained.epoch_loss;
    }
    return NleModel(options.dim, hp, std::move(entities), std::move(trained.vectors));
}

}  // namespace geovec
