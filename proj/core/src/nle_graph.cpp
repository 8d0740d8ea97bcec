#include "geovec/nle_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "geovec/error.hpp"
#include "geovec/geo.hpp"
#include "geovec/parallel.hpp"
#include "geovec/rng.hpp"
#include "geovec/spatial_index.hpp"

namespace geovec {

double damp(double meters, DampMode mode) noexcept {
    const double w = std::max(meters, kDampFloorMeters);
    const double inv_log = 1.0 / std::log(w);
    if (mode == DampMode::literal) return std::max(inv_log, std::numbers::e);
    return std::min(inv_log, std::numbers::e);
}

WeightedGraph build_graph(std::span<const GeoPoint> points, std::size_t k, DampMode mode, std::size_t threads) {
    if (points.size() < 2) throw InvalidInput("graph construction needs at least two training entities");
    if (k == 0) throw std::invalid_argument("k must be at least 1");

    const std::size_t n = points.size();
    const SpatialIndex index(std::vector<GeoPoint>(points.begin(), points.end()));

    std::vector<std::vector<std::uint32_t>> directed(n);
    parallel_for(n, threads, [&](std::size_t i) {
        for (const auto& nb : index.knn(points[i], k + 1)) {
            if (nb.index == i) continue;
            if (directed[i].size() == k) break;
            directed[i].push_back(static_cast<std::uint32_t>(nb.index));
        }
    });

    // Union: neighbor lists of u collect v whenever u->v or v->u exists.
    std::vector<std::vector<std::uint32_t>> undirected(n);
    for (std::size_t u = 0; u < n; ++u) {
        for (const auto v : directed[u]) {
            undirected[u].push_back(v);
            undirected[v].push_back(static_cast<std::uint32_t>(u));
        }
    }

    WeightedGraph g;
    g.points.assign(points.begin(), points.end());
    g.adjacency.resize(n);
    parallel_for(n, threads, [&](std::size_t u) {
        auto& nbrs = undirected[u];
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        auto& edges = g.adjacency[u];
        edges.reserve(nbrs.size());
        for (const auto v : nbrs) {
            const std::size_t lo = std::min<std::size_t>(u, v);
            const std::size_t hi = std::max<std::size_t>(u, v);
            edges.push_back({v, damp(haversine(points[lo], points[hi]), mode)});
        }
    });
    return g;
}

WalkCorpus random_walks(const WeightedGraph& g, std::size_t walks_per_node, std::size_t walk_length,
                        std::uint64_t seed, std::size_t threads) {
    const std::size_t n = g.size();
    std::vector<std::vector<double>> cumulative(n);
    for (std::size_t u = 0; u < n; ++u) {
        const auto& edges = g.adjacency[u];
        if (edges.empty()) throw InvalidInput("node " + std::to_string(u) + " has no neighbor; cannot walk");
        auto& c = cumulative[u];
        c.reserve(edges.size());
        double acc = 0.0;
        for (const auto& e : edges) c.push_back(acc += e.weight);
    }

    WalkCorpus corpus;
    corpus.walk_length = walk_length;
    corpus.tokens.resize(walks_per_node * n * walk_length);
    if (walk_length == 0) return corpus;

    for (std::size_t pass = 0; pass < walks_per_node; ++pass) {
        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0U);
        Rng shuffler(mix_seed(seed, pass));
        for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[shuffler.below(i)]);

        parallel_for(n, threads, [&](std::size_t slot) {
            const std::uint32_t start = order[slot];
            Rng rng(mix_seed(seed ^ 0x5bd1e995ULL, pass * n + start));
            auto* out = corpus.tokens.data() + (pass * n + slot) * walk_length;
            std::uint32_t cur = start;
            out[0] = cur;
            for (std::size_t step = 1; step < walk_length; ++step) {
                const auto& c = cumulative[cur];
                const double r = rng.uniform01() * c.back();
                const auto pos = static_cast<std::size_t>(std::upper_bound(c.begin(), c.end(), r) - c.begin());
                cur = g.adjacency[cur][std::min(pos, c.size() - 1)].target;
                out[step] = cur;
            }
        });
    }
    return corpus;
}

}  // namespace geovec
