#pragma once

#include "wordent/corpus.hpp"

#include <cstdint>

namespace wordent {

enum class Estimator { ML, NSB, SOURCE, MILLER_MADOW };

const char* estimator_name(Estimator e);

struct EntropyEstimate {
    double bits = 0.0;
    Estimator estimator = Estimator::ML;
    std::uint64_t n_tokens = 0;
    std::uint64_t n_types = 0;
    std::uint32_t block_size = 1;
};

struct NsbConfig {
    // 0 means "use the observed number of types".
    std::uint64_t alphabet_size = 0;
    // Simpson nodes on the xi grid; must be odd and >= 17.
    int quadrature_nodes = 129;
    double relative_tolerance = 1e-6;
};

// Plug-in estimate: -sum (f_i/N) log2(f_i/N) over present types.
EntropyEstimate ml_entropy(const FrequencyTable& table);

// Counts over the N-n+1 overlapping n-token blocks.
FrequencyTable ngram_table(const TokenizedText& text, std::uint32_t n);

// Posterior-mean block entropy under the entropy-flat mixture-of-Dirichlets
// prior, integrated over xi(beta) = psi(K*beta+1) - psi(beta+1).
EntropyEstimate nsb_entropy(const FrequencyTable& table, const NsbConfig& cfg = {});

// Bias-corrected plug-in: ml + (V-1)/(2 N ln 2). Cross-check estimator.
EntropyEstimate miller_madow_entropy(const FrequencyTable& table);

} // namespace wordent
