#include "geovec/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "geovec/error.hpp"
#include "geovec/geo.hpp"
#include "geovec/parallel.hpp"
#include "geovec/rng.hpp"

namespace geovec {

namespace {

bool ends_with(std::string_view s, std::string_view suffix) noexcept {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

void append_sample(const std::vector<OsmEntity>& pool, std::size_t count, std::uint64_t seed,
                   std::vector<OsmEntity>& out) {
    for (const auto i : sample_indices(pool.size(), count, seed)) out.push_back(pool[i]);
}

}  // namespace

bool is_identity_link_key(std::string_view key) noexcept {
    return key == "wikidata" || key == "wikipedia" || ends_with(key, ":wikidata") || ends_with(key, ":wikipedia");
}

bool has_identity_link(const OsmEntity& e) noexcept {
    return std::any_of(e.tags.begin(), e.tags.end(), [](const auto& kv) { return is_identity_link_key(kv.first); });
}

EntityPartition scan_snapshot(const Snapshot& s) {
    EntityPartition p;
    for (const auto& e : s.entities) {
        if (has_identity_link(e)) p.linked.push_back(e);
        else if (!e.tags.empty()) p.tagged.push_back(e);
        else p.other.push_back(e);
    }
    return p;
}

SamplePlan allocate(std::span<const Snapshot> snapshots, std::size_t n, std::uint64_t seed) {
    if (snapshots.empty()) throw InvalidInput("no snapshots to allocate training quotas over");
    std::vector<double> areas;
    areas.reserve(snapshots.size());
    for (const auto& s : snapshots) areas.push_back(geo_area(s.region));
    const double total = std::accumulate(areas.begin(), areas.end(), 0.0);
    if (!(total > 0.0)) throw InvalidInput("total snapshot area is zero");

    SamplePlan plan;
    plan.requested = n;
    plan.seed = seed;
    for (const double area : areas) {
        const double exact = static_cast<double>(n) * area / total;
        const double nearest = std::round(exact);
        const double snapped = std::abs(exact - nearest) <= 1e-9 * std::max(1.0, nearest) ? nearest : exact;
        plan.quotas.push_back(static_cast<std::size_t>(std::ceil(snapped)));
    }
    return plan;
}

std::vector<OsmEntity> sample_snapshot(const Snapshot& s, std::size_t quota, std::uint64_t seed) {
    const std::uint64_t stream = seed ^ stable_hash(s.name);
    auto part = scan_snapshot(s);
    auto out = std::move(part.linked);
    if (out.size() < quota) append_sample(part.tagged, quota - out.size(), mix_seed(stream, 1), out);
    if (out.size() < quota) append_sample(part.other, quota - out.size(), mix_seed(stream, 2), out);
    return out;
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
    k = std::min(k, n);
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

SampleResult sample_training(std::span<const Snapshot> snapshots, std::size_t n, std::uint64_t seed,
                             std::size_t threads) {
    SampleResult result;
    result.plan = allocate(snapshots, n, seed);

    std::vector<std::vector<OsmEntity>> chosen(snapshots.size());
    std::vector<std::optional<SampleShortfall>> shortfall(snapshots.size());
    parallel_for(snapshots.size(), threads, [&](std::size_t i) {
        const Snapshot& s = snapshots[i];
        const std::size_t quota = result.plan.quotas[i];
        chosen[i] = sample_snapshot(s, quota, seed);
        if (chosen[i].size() < quota) shortfall[i] = SampleShortfall{s.name, quota, s.entities.size()};
    });

    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        result.per_snapshot.push_back(chosen[i].size());
        if (shortfall[i]) result.shortfalls.push_back(*shortfall[i]);
        result.entities.insert(result.entities.end(), std::make_move_iterator(chosen[i].begin()),
                               std::make_move_iterator(chosen[i].end()));
    }
    return result;
}

}  // namespace geovec
