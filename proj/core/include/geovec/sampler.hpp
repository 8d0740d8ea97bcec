#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geovec/types.hpp"

namespace geovec {

/// Tag keys that count as identity links: wikidata, wikipedia, and any "*:wikidata" / "*:wikipedia".
[[nodiscard]] bool is_identity_link_key(std::string_view key) noexcept;
[[nodiscard]] bool has_identity_link(const OsmEntity& e) noexcept;

struct EntityPartition {
    std::vector<OsmEntity> linked;
    std::vector<OsmEntity> tagged;
    std::vector<OsmEntity> other;
};

/// Splits a snapshot into linked / tagged / other entities, preserving input order per class.
[[nodiscard]] EntityPartition scan_snapshot(const Snapshot& s);

struct SamplePlan {
    std::vector<std::size_t> quotas;  // one per snapshot, in input order
    std::size_t requested = 0;
    std::uint64_t seed = 0;
};

/// Area-proportional quotas: n_s = ceil(n * geo_area(s.region) / total_area).
/// Products within 1e-9 of an integer are snapped to it before the ceiling so that exact
/// ratios are not pushed up by rounding in the area computation.
/// Throws InvalidInput when there is no snapshot or the total area is zero.
[[nodiscard]] SamplePlan allocate(std::span<const Snapshot> snapshots, std::size_t n, std::uint64_t seed = 0);

struct SampleShortfall {
    std::string snapshot;
    std::size_t quota = 0;
    std::size_t available = 0;
};

struct SampleResult {
    std::vector<OsmEntity> entities;
    std::vector<std::size_t> per_snapshot;  // result count contributed by each snapshot
    std::vector<SampleShortfall> shortfalls;
    SamplePlan plan;
};

/// Geographically balanced training sample.
///
/// For each snapshot every linked entity is taken; any remaining quota is filled by uniform
/// sampling without replacement from tagged entities, then from the rest. Each snapshot draws
/// from its own stream seeded by (seed, hash of snapshot name), so the result does not depend on
/// scheduling. Snapshots may be processed on `threads` workers; output stays in input order.
[[nodiscard]] SampleResult sample_training(std::span<const Snapshot> snapshots, std::size_t n, std::uint64_t seed,
                                           std::size_t threads = 1);

/// One snapshot's share: all linked entities, then tagged, then the rest, up to `quota`.
/// The stream is seeded by seed ^ hash(snapshot name).
[[nodiscard]] std::vector<OsmEntity> sample_snapshot(const Snapshot& s, std::size_t quota, std::uint64_t seed);

/// k indices drawn uniformly without replacement from [0, n) by a partial Fisher-Yates shuffle,
/// returned in ascending order.
[[nodiscard]] std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed);

}  // namespace geovec
