#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "geovec/nle_graph.hpp"

namespace geovec {

struct SkipGramConfig {
    std::size_t dim = 128;
    std::size_t window = 10;
    std::size_t epochs = 5;
    std::size_t negatives = 5;
    double learning_rate = 0.025;
    double min_learning_rate = 0.0001;
    std::uint64_t seed = 1;
    /// Hogwild-style training on `threads` workers. Float accumulation order then depends on
    /// scheduling, so vectors are not reproducible; the default single-threaded mode is.
    bool parallel = false;
    std::size_t threads = 1;
};

struct SkipGramResult {
    std::size_t dim = 0;
    std::vector<float> vectors;      // vocab_size x dim, row-major
    std::vector<double> epoch_loss;  // mean negative-sampling loss per (center, context) pair
};

/// Skip-gram with negative sampling over a walk corpus (walk = sentence, node = token).
///
/// word2vec conventions: input vectors start uniform in [-0.5/d, 0.5/d), output vectors at zero;
/// the effective window is drawn from [1, window] per center token; noise tokens follow the
/// corpus unigram distribution raised to 3/4; the learning rate decays linearly to
/// min_learning_rate over all epochs.
/// Throws std::invalid_argument for dim = 0, window = 0 or an empty corpus.
[[nodiscard]] SkipGramResult train_skipgram(const WalkCorpus& corpus, std::size_t vocab_size,
                                            const SkipGramConfig& config);

}  // namespace geovec
