#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "geovec/emb_io.hpp"
#include "geovec/error.hpp"
#include "geovec/evalkit.hpp"
#include "geovec/kg.hpp"
#include "geovec/nle_model.hpp"
#include "geovec/osm_ingest.hpp"
#include "geovec/parallel.hpp"
#include "geovec/sampler.hpp"
#include "geovec/tags.hpp"

namespace geovec::cli {

namespace fs = std::filesystem;

AtomicOutput::AtomicOutput(fs::path path) : path_(std::move(path)), temp_(path_) {
    temp_ += ".partial";
    stream_.open(temp_, std::ios::binary | std::ios::trunc);
    if (!stream_) throw Error("cannot write '" + temp_.string() + "'");
}

AtomicOutput::~AtomicOutput() {
    if (committed_) return;
    stream_.close();
    std::error_code ec;
    fs::remove(temp_, ec);
}

void AtomicOutput::commit() {
    stream_.flush();
    if (!stream_) throw Error("failed writing '" + temp_.string() + "'");
    stream_.close();
    fs::rename(temp_, path_);
    committed_ = true;
}

namespace {

// Carries an exit code out of a command body.
struct Exit {
    int code;
    std::string message;
};

std::size_t resolve_threads(std::optional<std::size_t> flag) {
    if (flag) return std::max<std::size_t>(1, *flag);
    if (const char* env = std::getenv("GEOVEC_THREADS")) {
        try {
            return std::max<std::size_t>(1, std::stoul(env));
        } catch (const std::exception&) {
            throw Exit{kExitUsage, "GEOVEC_THREADS must be a positive integer"};
        }
    }
    return 1;
}

std::vector<Snapshot> load_all(const std::vector<std::string>& paths, std::size_t threads, std::ostream& err) {
    std::vector<Snapshot> snapshots(paths.size());
    std::vector<IngestReport> reports(paths.size());
    try {
        parallel_for(paths.size(), threads, [&](std::size_t i) { snapshots[i] = load_snapshot(paths[i], &reports[i]); });
    } catch (const Error& e) {
        throw Exit{kExitInput, e.what()};
    }
    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (reports[i].dropped_entities > 0 || reports[i].missing_members > 0) {
            err << "warning: " << paths[i] << ": " << reports[i].missing_members << " missing member reference(s), "
                << reports[i].dropped_entities << " unresolvable entit(y/ies) dropped\n";
        }
    }
    return snapshots;
}

NleModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Exit{kExitInput, "cannot open model '" + path + "'"};
    try {
        return NleModel::load(in);
    } catch (const Error& e) {
        throw Exit{kExitInput, path + ": " + e.what()};
    }
}

WordVectorTable load_vectors(const std::string& path, std::ostream& err) {
    std::ifstream in(path);
    if (!in) throw Exit{kExitInput, "cannot open word vectors '" + path + "'"};
    try {
        WordVectorReport report;
        auto table = load_word_vectors(in, &report);
        if (report.duplicates > 0) err << "warning: " << path << ": " << report.duplicates << " duplicate token(s), last kept\n";
        return table;
    } catch (const Error& e) {
        throw Exit{kExitInput, path + ": " + e.what()};
    }
}

std::vector<EmbeddingRecord> encode_all(const std::vector<OsmEntity>& entities, std::size_t threads,
                                        const std::function<std::vector<double>(const OsmEntity&)>& encode) {
    std::vector<EmbeddingRecord> out(entities.size());
    parallel_for(entities.size(), threads, [&](std::size_t i) {
        out[i] = EmbeddingRecord{entities[i].kind, entities[i].id, encode(entities[i])};
    });
    return out;
}

std::string percent(double fraction) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << fraction * 100.0;
    return s.str();
}

struct SampleArgs {
    std::vector<std::string> inputs;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::optional<std::size_t> threads;
};

struct TrainArgs {
    std::string training;
    std::size_t dim = 128;
    NleHyperparameters hyper;
    std::string damp = "capped";
    bool parallel = false;
    std::string model_out;
    std::optional<std::size_t> threads;
};

struct EncodeArgs {
    std::vector<std::string> inputs;
    std::string model;
    std::string vectors;
    std::string mode = "both";
    std::string out_prefix;
    bool include_tagless = false;
    std::optional<std::size_t> threads;
};

struct KgArgs {
    std::vector<std::string> inputs;
    kg::KgConfig cfg;
    std::string doi_tags = "10.5281/zenodo.4321406";
    std::string doi_nle = "10.5281/zenodo.4323008";
    std::string out;
    bool include_tagless = false;
};

struct EvalArgs {
    std::string dataset;
    std::size_t k = 1;
    std::optional<std::size_t> threads;
};

struct DatasetArgs {
    std::string task;
    std::vector<std::string> inputs;
    std::string class_map;
    std::string embedding;
    std::string model;
    std::string vectors;
    std::size_t samples = 1000;
    std::size_t min_count = 1;
    std::uint64_t seed = 0;
    std::string out;
    std::optional<std::size_t> threads;
};

int cmd_sample(const SampleArgs& a, std::ostream& out, std::ostream& err) {
    const auto threads = resolve_threads(a.threads);
    const auto snapshots = load_all(a.inputs, threads, err);
    SampleResult result;
    try {
        result = sample_training(snapshots, a.n, a.seed, threads);
    } catch (const InvalidInput& e) {
        throw Exit{kExitData, e.what()};
    }
    for (const auto& s : result.shortfalls) {
        err << "warning: snapshot '" << s.snapshot << "' has " << s.available << " entities, fewer than its quota of "
            << s.quota << "; all taken\n";
    }
    AtomicOutput file(a.out);
    Snapshot sampled;
    sampled.entities = std::move(result.entities);
    write_jsonl(sampled, file.stream());
    file.commit();
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        out << snapshots[i].name << "\tquota=" << result.plan.quotas[i] << "\tsampled=" << result.per_snapshot[i] << '\n';
    }
    out << "total\t" << sampled.entities.size() << '\n';
    return kExitOk;
}

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
    const auto threads = resolve_threads(a.threads);
    const auto snapshots = load_all({a.training}, 1, err);
    const auto& training = snapshots.front().entities;
    if (training.size() < 2) throw Exit{kExitData, "training needs at least two entities, got " + std::to_string(training.size())};

    TrainOptions options;
    options.dim = a.dim;
    options.hyper = a.hyper;
    options.hyper.damp_mode = a.damp == "literal" ? DampMode::literal : DampMode::capped;
    options.threads = threads;
    options.parallel_training = a.parallel;

    TrainReport report;
    const auto model = [&] {
        try {
            return train_nle(training, options, &report);
        } catch (const InvalidInput& e) {
            throw Exit{kExitData, e.what()};
        }
    }();
    AtomicOutput file(a.model_out);
    model.save(file.stream());
    file.commit();

    out << "entities\t" << model.size() << "\nedges\t" << report.edges << "\nwalks\t" << report.walks << '\n';
    for (std::size_t e = 0; e < report.epoch_loss.size(); ++e) {
        out << "epoch " << (e + 1) << "\tobjective\t" << format_double(report.epoch_loss[e]) << '\n';
    }
    out << "final objective\t" << (report.epoch_loss.empty() ? std::string("0") : format_double(report.epoch_loss.back()))
        << '\n';
    return kExitOk;
}

int cmd_encode(const EncodeArgs& a, std::ostream& out, std::ostream& err) {
    const bool want_nle = a.mode == "nle" || a.mode == "both";
    const bool want_tags = a.mode == "tags" || a.mode == "both";
    if (want_nle && a.model.empty()) throw Exit{kExitUsage, "--model is required for mode " + a.mode};
    if (want_tags && a.vectors.empty()) throw Exit{kExitUsage, "--vectors is required for mode " + a.mode};
    const auto threads = resolve_threads(a.threads);

    std::optional<NleModel> model;
    if (want_nle) model.emplace(load_model(a.model));
    std::optional<WordVectorTable> table;
    if (want_tags) table.emplace(load_vectors(a.vectors, err));

    auto snapshots = load_all(a.inputs, threads, err);
    if (!a.include_tagless) {
        for (auto& s : snapshots) s = filter_tagged(s);
    }

    // Gather every output before the first rename so a failure leaves nothing behind.
    std::vector<std::unique_ptr<AtomicOutput>> files;
    for (const auto& s : snapshots) {
        const std::string stem = a.out_prefix + (snapshots.size() > 1 ? "." + s.name : std::string());
        if (want_nle) {
            const auto records =
                encode_all(s.entities, threads, [&](const OsmEntity& e) { return nle_encode(*model, e.point); });
            files.push_back(std::make_unique<AtomicOutput>(stem + ".nle.tsv"));
            write_tsv(records, files.back()->stream(), model->dim());
            out << stem << ".nle.tsv\t" << records.size() << '\n';
        }
        if (want_tags) {
            const auto records =
                encode_all(s.entities, threads, [&](const OsmEntity& e) { return gvtags_encode(e, *table); });
            files.push_back(std::make_unique<AtomicOutput>(stem + ".tags.tsv"));
            write_tsv(records, files.back()->stream(), table->dim());
            out << stem << ".tags.tsv\t" << records.size() << '\n';
        }
    }
    for (auto& f : files) f->commit();
    return kExitOk;
}

int cmd_kg(KgArgs a, std::ostream& out, std::ostream& err) {
    if (!kg::valid_version_label(a.cfg.version)) throw Exit{kExitUsage, "--version must match v[0-9]+"};
    a.cfg.doi_tags = a.doi_tags.empty() ? std::nullopt : std::optional(a.doi_tags);
    a.cfg.doi_nle = a.doi_nle.empty() ? std::nullopt : std::optional(a.doi_nle);
    try {
        kg::validate(a.cfg);
    } catch (const InvalidInput& e) {
        throw Exit{kExitUsage, e.what()};
    }
    auto snapshots = load_all(a.inputs, 1, err);
    std::vector<OsmEntity> entities;
    for (auto& s : snapshots) {
        for (auto& e : s.entities) {
            if (a.include_tagless || !e.tags.empty()) entities.push_back(std::move(e));
        }
    }
    kg::LinkReport report;
    const auto triples = kg::knowledge_graph(a.cfg, entities, &report);
    if (report.malformed > 0) err << "warning: " << report.malformed << " malformed link tag(s) skipped\n";
    AtomicOutput file(a.out);
    kg::write_ntriples(triples, file.stream());
    file.commit();
    out << "entities\t" << entities.size() << "\ntriples\t" << triples.size() << '\n';
    return kExitOk;
}

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& /*err*/) {
    std::ifstream in(a.dataset);
    if (!in) throw Exit{kExitInput, "cannot open dataset '" + a.dataset + "'"};
    eval::LabeledDataset ds;
    try {
        ds = eval::read_dataset_tsv(in);
    } catch (const Error& e) {
        throw Exit{kExitInput, a.dataset + ": " + e.what()};
    }
    eval::Classification result;
    try {
        result = eval::knn_classify(ds, a.k, resolve_threads(a.threads));
    } catch (const InvalidInput& e) {
        throw Exit{kExitData, e.what()};
    }
    const auto& m = result.metrics;
    out << "metric\tpercent\n"
        << "precision\t" << percent(m.precision) << '\n'
        << "recall\t" << percent(m.recall) << '\n'
        << "f1\t" << percent(m.f1) << '\n'
        << "accuracy\t" << percent(m.accuracy) << '\n';
    return kExitOk;
}

int cmd_dataset(const DatasetArgs& a, std::ostream& out, std::ostream& err) {
    const auto threads = resolve_threads(a.threads);
    eval::Encoder encode;
    std::optional<NleModel> model;
    std::optional<WordVectorTable> table;
    if (a.embedding == "nle") {
        if (a.model.empty()) throw Exit{kExitUsage, "--model is required for --embedding nle"};
        model.emplace(load_model(a.model));
        encode = [&](const OsmEntity& e) { return nle_encode(*model, e.point); };
    } else {
        if (a.vectors.empty()) throw Exit{kExitUsage, "--vectors is required for --embedding tags"};
        table.emplace(load_vectors(a.vectors, err));
        encode = [&](const OsmEntity& e) { return gvtags_encode(e, *table); };
    }
    const auto snapshots = load_all(a.inputs, threads, err);

    std::vector<eval::LabeledExample> examples;
    try {
        if (a.task == "country") {
            examples = eval::build_country_examples(snapshots, a.samples, a.min_count, a.seed);
        } else {
            if (a.class_map.empty()) throw Exit{kExitUsage, "--class-map is required for --task type"};
            std::ifstream in(a.class_map);
            if (!in) throw Exit{kExitInput, "cannot open class map '" + a.class_map + "'"};
            eval::ClassMap map;
            try {
                map = eval::load_class_map(in);
            } catch (const Error& e) {
                throw Exit{kExitInput, a.class_map + ": " + e.what()};
            }
            std::vector<OsmEntity> entities;
            for (const auto& s : snapshots) entities.insert(entities.end(), s.entities.begin(), s.entities.end());
            examples = eval::build_type_examples(entities, map, a.min_count, a.seed);
        }
    } catch (const InvalidInput& e) {
        throw Exit{kExitData, e.what()};
    }
    const auto ds = eval::encode_examples(examples, encode, threads);
    AtomicOutput file(a.out);
    eval::write_dataset_tsv(ds, file.stream());
    file.commit();
    std::map<std::string, std::size_t> per_label;
    for (const auto& r : ds) ++per_label[r.label];
    for (const auto& [label, count] : per_label) out << label << '\t' << count << '\n';
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Geographic and tag-semantic embeddings of OpenStreetMap entities"};
    app.name("geovec");
    app.require_subcommand(1);

    SampleArgs sample;
    auto* s = app.add_subcommand("sample", "Area-balanced training sample from OSM snapshots");
    s->add_option("--input", sample.inputs, "Snapshot files (.osm/.xml or .jsonl)")->required()->check(CLI::ExistingFile);
    s->add_option("--n", sample.n, "Minimum number of training entities")->required();
    s->add_option("--seed", sample.seed, "Random seed");
    s->add_option("--out", sample.out, "Output JSON-lines file")->required();
    s->add_option("--threads", sample.threads, "Worker threads (default $GEOVEC_THREADS or 1)");

    TrainArgs train;
    auto* t = app.add_subcommand("train", "Train the location-embedding model");
    t->add_option("--training", train.training, "Training entities (JSON-lines)")->required()->check(CLI::ExistingFile);
    t->add_option("--dim", train.dim, "Embedding dimension")->check(CLI::PositiveNumber);
    t->add_option("--k", train.hyper.k, "Nearest neighbors per node")->check(CLI::PositiveNumber);
    t->add_option("--walks", train.hyper.walks_per_node, "Walks per node")->check(CLI::PositiveNumber);
    t->add_option("--walk-length", train.hyper.walk_length, "Nodes per walk")->check(CLI::PositiveNumber);
    t->add_option("--window", train.hyper.window, "Skip-gram window")->check(CLI::PositiveNumber);
    t->add_option("--epochs", train.hyper.epochs, "Training epochs")->check(CLI::PositiveNumber);
    t->add_option("--negatives", train.hyper.negatives, "Negative samples")->check(CLI::NonNegativeNumber);
    t->add_option("--learning-rate", train.hyper.learning_rate, "Initial learning rate")->check(CLI::PositiveNumber);
    t->add_option("--seed", train.hyper.seed, "Random seed");
    t->add_option("--damp", train.damp, "Edge damping: capped or literal")->check(CLI::IsMember({"capped", "literal"}));
    t->add_flag("--parallel-training", train.parallel, "Hogwild skip-gram on --threads workers (not reproducible)");
    t->add_option("--model-out", train.model_out, "Model output path")->required();
    t->add_option("--threads", train.threads, "Worker threads (default $GEOVEC_THREADS or 1)");

    EncodeArgs encode;
    auto* e = app.add_subcommand("encode", "Encode snapshot entities into TSV embedding files");
    e->add_option("--input", encode.inputs, "Snapshot files")->required()->check(CLI::ExistingFile);
    e->add_option("--model", encode.model, "Trained location-embedding model");
    e->add_option("--vectors", encode.vectors, "Word vectors in text format");
    e->add_option("--mode", encode.mode, "nle, tags or both")->check(CLI::IsMember({"nle", "tags", "both"}));
    e->add_option("--out-prefix", encode.out_prefix, "Output path prefix")->required();
    e->add_flag("--include-tagless", encode.include_tagless, "Also encode entities without tags");
    e->add_option("--threads", encode.threads, "Worker threads (default $GEOVEC_THREADS or 1)");

    KgArgs kgargs;
    auto* k = app.add_subcommand("kg", "Emit the knowledge graph as N-Triples");
    k->add_option("--input", kgargs.inputs, "Snapshot files")->required()->check(CLI::ExistingFile);
    k->add_option("--version", kgargs.cfg.version, "Release label (v[0-9]+)");
    k->add_option("--doi-tags", kgargs.doi_tags, "DOI of the tag-embedding corpus (empty to omit)");
    k->add_option("--doi-nle", kgargs.doi_nle, "DOI of the location-embedding corpus (empty to omit)");
    k->add_option("--date", kgargs.cfg.generated_date, "Collection generation date (YYYY-MM-DD)");
    k->add_option("--version-info", kgargs.cfg.version_info, "owl:versionInfo of the collection");
    k->add_option("--namespace", kgargs.cfg.ns.geovec, "Resource namespace IRI");
    k->add_option("--schema-namespace", kgargs.cfg.ns.geovec_s, "Schema namespace IRI");
    k->add_flag("--include-tagless", kgargs.include_tagless, "Also describe entities without tags");
    k->add_option("--out", kgargs.out, "Output .nt file")->required();

    EvalArgs evalargs;
    auto* v = app.add_subcommand("eval", "k-NN classification metrics on a labeled dataset");
    v->add_option("--dataset", evalargs.dataset, "Labeled dataset TSV")->required();
    v->add_option("--k", evalargs.k, "Neighbors")->check(CLI::PositiveNumber);
    v->add_option("--threads", evalargs.threads, "Worker threads (default $GEOVEC_THREADS or 1)");

    DatasetArgs ds;
    auto* d = app.add_subcommand("dataset", "Build a labeled case-study dataset");
    d->add_option("--task", ds.task, "country or type")->required()->check(CLI::IsMember({"country", "type"}));
    d->add_option("--input", ds.inputs, "Snapshot files (one per country for --task country)")
        ->required()
        ->check(CLI::ExistingFile);
    d->add_option("--class-map", ds.class_map, "QID<TAB>label file for --task type");
    d->add_option("--embedding", ds.embedding, "nle or tags")->required()->check(CLI::IsMember({"nle", "tags"}));
    d->add_option("--model", ds.model, "Trained location-embedding model");
    d->add_option("--vectors", ds.vectors, "Word vectors in text format");
    d->add_option("--samples-per-country", ds.samples, "Entities sampled per country snapshot");
    d->add_option("--min-count", ds.min_count, "Drop classes with fewer examples");
    d->add_option("--seed", ds.seed, "Random seed");
    d->add_option("--out", ds.out, "Output dataset TSV")->required();
    d->add_option("--threads", ds.threads, "Worker threads (default $GEOVEC_THREADS or 1)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& ex) {
        err << "usage error: " << ex.what() << '\n';
        return kExitUsage;
    }

    try {
        if (s->parsed()) return cmd_sample(sample, out, err);
        if (t->parsed()) return cmd_train(train, out, err);
        if (e->parsed()) return cmd_encode(encode, out, err);
        if (k->parsed()) return cmd_kg(kgargs, out, err);
        if (v->parsed()) return cmd_eval(evalargs, out, err);
        if (d->parsed()) return cmd_dataset(ds, out, err);
    } catch (const Exit& ex) {
        err << (ex.code == kExitUsage ? "usage error: " : "error: ") << ex.message << '\n';
        return ex.code;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return 1;
    }
    return kExitUsage;
}

}  // namespace geovec::cli
