#include "geovec/skipgram.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "geovec/parallel.hpp"
#include "geovec/rng.hpp"

namespace geovec {

namespace {

// Plain access for single-threaded training.
struct DirectAccess {
    static float load(const float& x) noexcept { return x; }
    static void add(float& x, float delta) noexcept { x += delta; }
};

// Hogwild: racy but well-defined relaxed loads and stores.
struct RelaxedAccess {
    static float load(const float& x) noexcept {
        return std::atomic_ref<float>(const_cast<float&>(x)).load(std::memory_order_relaxed);
    }
    static void add(float& x, float delta) noexcept {
        std::atomic_ref<float> ref(x);
        ref.store(ref.load(std::memory_order_relaxed) + delta, std::memory_order_relaxed);
    }
};

// -log(sigmoid(x)), computed without overflow.
double neg_log_sigmoid(double x) noexcept {
    return x > 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

class NoiseSampler {
public:
    NoiseSampler(const WalkCorpus& corpus, std::size_t vocab_size) : cumulative_(vocab_size) {
        std::vector<double> counts(vocab_size, 0.0);
        for (const auto t : corpus.tokens) counts[t] += 1.0;
        double acc = 0.0;
        for (std::size_t i = 0; i < vocab_size; ++i) cumulative_[i] = acc += std::pow(counts[i], 0.75);
    }

    std::uint32_t draw(Rng& rng) const {
        const double r = rng.uniform01() * cumulative_.back();
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
        return static_cast<std::uint32_t>(std::min<std::size_t>(it - cumulative_.begin(), cumulative_.size() - 1));
    }

private:
    std::vector<double> cumulative_;
};

struct Counters {
    double loss = 0.0;
    std::size_t pairs = 0;
};

class Trainer {
public:
    Trainer(const WalkCorpus& corpus, std::size_t vocab_size, const SkipGramConfig& config)
        : corpus_(corpus),
          config_(config),
          dim_(config.dim),
          noise_(corpus, vocab_size),
          input_(vocab_size * config.dim),
          output_(vocab_size * config.dim, 0.0f),
          total_tokens_(static_cast<double>(corpus.tokens.size() * config.epochs) + 1.0) {
        Rng init(mix_seed(config.seed, 0x1d));
        for (auto& x : input_) x = static_cast<float>((init.uniform01() - 0.5) / static_cast<double>(dim_));
    }

    // Trains over walks [begin, end) once.
    template <typename Access>
    Counters run_walks(std::size_t begin, std::size_t end, Rng& rng, std::vector<float>& grad) {
        Counters c;
        const auto window = static_cast<std::ptrdiff_t>(config_.window);
        for (std::size_t w = begin; w < end; ++w) {
            const auto walk = corpus_.walk(w);
            const auto len = static_cast<std::ptrdiff_t>(walk.size());
            for (std::ptrdiff_t i = 0; i < len; ++i) {
                const double progress = static_cast<double>(processed_.fetch_add(1, std::memory_order_relaxed)) / total_tokens_;
                const auto lr = static_cast<float>(
                    std::max(config_.min_learning_rate,
                             config_.learning_rate - (config_.learning_rate - config_.min_learning_rate) * progress));
                const std::ptrdiff_t span = window - static_cast<std::ptrdiff_t>(rng.below(config_.window));
                const std::uint32_t center = walk[static_cast<std::size_t>(i)];
                for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, i - span); j <= std::min(len - 1, i + span); ++j) {
                    if (j == i) continue;
                    c.loss += update<Access>(walk[static_cast<std::size_t>(j)], center, lr, rng, grad);
                    ++c.pairs;
                }
            }
        }
        return c;
    }

    SkipGramResult train() {
        SkipGramResult result;
        result.dim = dim_;
        const std::size_t walks = corpus_.walk_count();
        const std::size_t threads = config_.parallel ? std::max<std::size_t>(1, config_.threads) : 1;
        Rng rng(config_.seed);
        std::vector<Rng> worker_rngs;
        for (std::size_t t = 0; t < threads; ++t) worker_rngs.emplace_back(mix_seed(config_.seed, 0x100 + t));

        for (std::size_t epoch = 0; epoch < config_.epochs; ++epoch) {
            Counters total;
            if (threads == 1) {
                std::vector<float> grad(dim_);
                total = run_walks<DirectAccess>(0, walks, rng, grad);
            } else {
                std::vector<Counters> parts(threads);
                const std::size_t chunk = (walks + threads - 1) / threads;
                parallel_for(threads, threads, [&](std::size_t t) {
                    std::vector<float> grad(dim_);
                    const std::size_t b = std::min(walks, t * chunk);
                    const std::size_t e = std::min(walks, b + chunk);
                    parts[t] = run_walks<RelaxedAccess>(b, e, worker_rngs[t], grad);
                });
                for (const auto& p : parts) {
                    total.loss += p.loss;
                    total.pairs += p.pairs;
                }
            }
            result.epoch_loss.push_back(total.pairs == 0 ? 0.0 : total.loss / static_cast<double>(total.pairs));
        }
        result.vectors = std::move(input_);
        return result;
    }

private:
    template <typename Access>
    double update(std::uint32_t context, std::uint32_t center, float lr, Rng& rng, std::vector<float>& grad) {
        float* in = input_.data() + static_cast<std::size_t>(context) * dim_;
        std::fill(grad.begin(), grad.end(), 0.0f);
        double loss = 0.0;
        for (std::size_t s = 0; s <= config_.negatives; ++s) {
            std::uint32_t target = center;
            float label = 1.0f;
            if (s > 0) {
                target = noise_.draw(rng);
                if (target == center) continue;
                label = 0.0f;
            }
            float* out = output_.data() + static_cast<std::size_t>(target) * dim_;
            float f = 0.0f;
            for (std::size_t d = 0; d < dim_; ++d) f += Access::load(in[d]) * Access::load(out[d]);
            loss += neg_log_sigmoid(label > 0.0f ? f : -f);
            const float sig = 1.0f / (1.0f + std::exp(-f));
            const float g = (label - sig) * lr;
            for (std::size_t d = 0; d < dim_; ++d) {
                grad[d] += g * Access::load(out[d]);
                Access::add(out[d], g * Access::load(in[d]));
            }
        }
        for (std::size_t d = 0; d < dim_; ++d) Access::add(in[d], grad[d]);
        return loss;
    }

    const WalkCorpus& corpus_;
    SkipGramConfig config_;
    std::size_t dim_;
    NoiseSampler noise_;
    std::vector<float> input_;
    std::vector<float> output_;
    double total_tokens_;
    std::atomic<std::size_t> processed_{0};
};

}  // namespace

SkipGramResult train_skipgram(const WalkCorpus& corpus, std::size_t vocab_size, const SkipGramConfig& config) {
    if (config.dim == 0) throw std::invalid_argument("embedding dimension must be at least 1");
    if (config.window == 0) throw std::invalid_argument("window must be at least 1");
    if (corpus.tokens.empty() || vocab_size == 0) throw std::invalid_argument("empty walk corpus");
    for (const auto t : corpus.tokens) {
        if (t >= vocab_size) throw std::invalid_argument("walk token outside the vocabulary");
    }
    Trainer trainer(corpus, vocab_size, config);
    return trainer.train();
}

}  // namespace geovec
