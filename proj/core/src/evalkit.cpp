#include "geovec/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

#include "geovec/emb_io.hpp"
#include "geovec/error.hpp"
#include "geovec/parallel.hpp"
#include "geovec/rng.hpp"
#include "geovec/sampler.hpp"

namespace geovec::eval {

std::vector<LabeledExample> balance_and_split(std::map<std::string, std::vector<OsmEntity>> by_label,
                                              std::size_t min_count, std::uint64_t seed) {
    std::erase_if(by_label, [&](const auto& kv) { return kv.second.size() < min_count || kv.second.empty(); });
    if (by_label.empty()) throw InvalidInput("no class has at least " + std::to_string(min_count) + " examples");

    std::size_t per_class = by_label.begin()->second.size();
    for (const auto& [label, members] : by_label) per_class = std::min(per_class, members.size());
    const auto train_count = static_cast<std::size_t>(std::llround(kTrainFraction * static_cast<double>(per_class)));

    std::vector<LabeledExample> out;
    out.reserve(per_class * by_label.size());
    for (auto& [label, members] : by_label) {
        const std::uint64_t stream = mix_seed(seed, stable_hash(label));
        auto chosen = sample_indices(members.size(), per_class, stream);
        Rng rng(mix_seed(stream, 1));
        for (std::size_t i = chosen.size(); i > 1; --i) std::swap(chosen[i - 1], chosen[rng.below(i)]);
        for (std::size_t j = 0; j < chosen.size(); ++j) {
            out.push_back({j < train_count ? Split::train : Split::test, label, std::move(members[chosen[j]])});
        }
    }
    return out;
}

std::vector<LabeledExample> build_country_examples(std::span<const Snapshot> snapshots,
                                                   std::size_t samples_per_country, std::size_t min_count,
                                                   std::uint64_t seed) {
    std::map<std::string, std::vector<OsmEntity>> by_label;
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        const Snapshot& s = snapshots[i];
        if (s.entities.empty()) continue;
        auto sampled = sample_snapshot(s, samples_per_country, mix_seed(seed, i));
        auto& bucket = by_label[s.name];
        // sample_snapshot keeps every linked entity; more than the quota are thinned uniformly.
        for (const auto j : sample_indices(sampled.size(), samples_per_country, mix_seed(mix_seed(seed, i), 1))) {
            bucket.push_back(std::move(sampled[j]));
        }
    }
    return balance_and_split(std::move(by_label), min_count, seed);
}

ClassMap load_class_map(std::istream& in) {
    ClassMap map;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto cells = split_tabs(line);
        if (cells.size() != 2 || cells[0].empty() || cells[1].empty()) {
            throw ParseError(line_no, "class map rows must be QID<TAB>label");
        }
        if (map.empty() && (cells[0] == "QID" || cells[0] == "qid")) continue;
        map.insert_or_assign(std::string(cells[0]), std::string(cells[1]));
    }
    return map;
}

std::vector<LabeledExample> build_type_examples(std::span<const OsmEntity> entities, const ClassMap& class_map,
                                                std::size_t min_count, std::uint64_t seed) {
    std::map<std::string, std::vector<OsmEntity>> by_label;
    for (const auto& e : entities) {
        const auto tag = e.tags.find("wikidata");
        if (tag == e.tags.end()) continue;
        const auto cls = class_map.find(tag->second);
        if (cls == class_map.end()) continue;
        by_label[cls->second].push_back(e);
    }
    if (by_label.empty()) throw InvalidInput("no entity has a wikidata link present in the class map");
    return balance_and_split(std::move(by_label), min_count, seed);
}

LabeledDataset encode_examples(std::span<const LabeledExample> examples, const Encoder& encode, std::size_t threads) {
    LabeledDataset ds(examples.size());
    parallel_for(examples.size(), threads, [&](std::size_t i) {
        const auto& ex = examples[i];
        ds[i] = LabeledRecord{ex.split, ex.label, ex.entity.kind, ex.entity.id, encode(ex.entity)};
    });
    return ds;
}

LabeledDataset build_country_dataset(std::span<const Snapshot> snapshots, std::size_t samples_per_country,
                                     std::size_t min_count, std::uint64_t seed, const Encoder& encode) {
    const auto examples = build_country_examples(snapshots, samples_per_country, min_count, seed);
    return encode_examples(examples, encode);
}

LabeledDataset build_type_dataset(std::span<const OsmEntity> entities, const ClassMap& class_map,
                                  std::size_t min_count, std::uint64_t seed, const Encoder& encode) {
    const auto examples = build_type_examples(entities, class_map, min_count, seed);
    return encode_examples(examples, encode);
}

void write_dataset_tsv(const LabeledDataset& ds, std::ostream& out) {
    const std::size_t dim = ds.empty() ? 0 : ds.front().vector.size();
    for (const auto& r : ds) {
        if (r.vector.size() != dim) throw InvalidInput("dataset records have mixed dimensions");
        if (r.label.find_first_of("\t\n") != std::string::npos) throw InvalidInput("label contains a tab or newline");
    }
    std::string line = "split\tlabel\tkind\tid";
    for (std::size_t i = 0; i < dim; ++i) line += "\tv" + std::to_string(i);
    out << line << '\n';
    for (const auto& r : ds) {
        line = r.split == Split::train ? "train" : "test";
        line += '\t';
        line += r.label;
        line += '\t';
        line += to_string(r.kind);
        line += '\t';
        line += std::to_string(r.id);
        for (const double x : r.vector) {
            line += '\t';
            line += format_double(x);
        }
        out << line << '\n';
    }
}

LabeledDataset read_dataset_tsv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "missing dataset header");
    const auto header = split_tabs(line);
    if (header.size() < 4 || header[0] != "split" || header[1] != "label" || header[2] != "kind" || header[3] != "id") {
        throw ParseError(1, "header must start with split\\tlabel\\tkind\\tid");
    }
    const std::size_t dim = header.size() - 4;
    LabeledDataset ds;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_tabs(line);
        if (cells.size() != dim + 4) throw ParseError(line_no, "ragged dataset row");
        LabeledRecord r;
        if (cells[0] == "train") r.split = Split::train;
        else if (cells[0] == "test") r.split = Split::test;
        else throw ParseError(line_no, "split must be train or test");
        r.label = std::string(cells[1]);
        const auto kind = parse_kind(cells[2]);
        if (!kind) throw ParseError(line_no, "bad kind '" + std::string(cells[2]) + "'");
        r.kind = *kind;
        if (cells[3].empty() || cells[3].find_first_not_of("0123456789") != std::string_view::npos) {
            throw ParseError(line_no, "bad id '" + std::string(cells[3]) + "'");
        }
        try {
            r.id = std::stoull(std::string(cells[3]));
        } catch (const std::out_of_range&) {
            throw ParseError(line_no, "id out of range");
        }
        for (std::size_t i = 0; i < dim; ++i) {
            const auto v = parse_double(cells[i + 4]);
            if (!v || !std::isfinite(*v)) throw ParseError(line_no, "non-numeric cell '" + std::string(cells[i + 4]) + "'");
            r.vector.push_back(*v);
        }
        ds.push_back(std::move(r));
    }
    return ds;
}

Metrics metrics(std::span<const std::string> predicted, std::span<const std::string> gold) {
    if (predicted.size() != gold.size()) throw std::invalid_argument("prediction and gold lengths differ");
    if (gold.empty()) throw std::invalid_argument("metrics of an empty prediction set");

    std::set<std::string, std::less<>> labels(gold.begin(), gold.end());
    labels.insert(predicted.begin(), predicted.end());
    std::map<std::string_view, std::size_t> tp, pred_count, gold_count;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        ++pred_count[predicted[i]];
        ++gold_count[gold[i]];
        if (predicted[i] == gold[i]) {
            ++tp[gold[i]];
            ++correct;
        }
    }
    Metrics m;
    for (const auto& label : labels) {
        const double t = static_cast<double>(tp[label]);
        const double p = pred_count[label] == 0 ? 0.0 : t / static_cast<double>(pred_count[label]);
        const double r = gold_count[label] == 0 ? 0.0 : t / static_cast<double>(gold_count[label]);
        m.precision += p;
        m.recall += r;
        m.f1 += (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
    }
    const auto n = static_cast<double>(labels.size());
    m.precision /= n;
    m.recall /= n;
    m.f1 /= n;
    m.accuracy = static_cast<double>(correct) / static_cast<double>(gold.size());
    return m;
}

Classification knn_classify(const LabeledDataset& ds, std::size_t k, std::size_t threads) {
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    std::vector<const LabeledRecord*> train;
    std::vector<const LabeledRecord*> test;
    for (const auto& r : ds) (r.split == Split::train ? train : test).push_back(&r);
    if (train.empty() || test.empty()) throw InvalidInput("dataset needs non-empty train and test splits");
    if (k > train.size()) {
        throw InvalidInput("k = " + std::to_string(k) + " exceeds the training split size " + std::to_string(train.size()));
    }
    const std::size_t dim = train.front()->vector.size();
    for (const auto& r : ds) {
        if (r.vector.size() != dim) throw InvalidInput("dataset records have mixed dimensions");
    }

    Classification out;
    out.predicted.resize(test.size());
    out.gold.resize(test.size());
    parallel_for(test.size(), threads, [&](std::size_t t) {
        const auto& q = test[t]->vector;
        std::vector<std::pair<double, std::size_t>> dist(train.size());
        for (std::size_t i = 0; i < train.size(); ++i) {
            double sq = 0.0;
            const auto& v = train[i]->vector;
            for (std::size_t d = 0; d < dim; ++d) {
                const double diff = q[d] - v[d];
                sq += diff * diff;
            }
            dist[i] = {sq, i};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

        std::map<std::string_view, std::pair<std::size_t, double>> votes;  // label -> (count, distance sum)
        for (std::size_t j = 0; j < k; ++j) {
            auto& v = votes[train[dist[j].second]->label];
            ++v.first;
            v.second += std::sqrt(dist[j].first);
        }
        auto best = votes.begin();
        for (auto it = votes.begin(); it != votes.end(); ++it) {
            if (it->second.first > best->second.first ||
                (it->second.first == best->second.first && it->second.second < best->second.second)) {
                best = it;
            }
        }
        out.predicted[t] = std::string(best->first);
        out.gold[t] = test[t]->label;
    });
    out.metrics = metrics(out.predicted, out.gold);
    return out;
}

}  // namespace geovec::eval
