#pragma once

#include "wordent/corpus.hpp"

#include <cstdint>
#include <vector>

namespace wordent {

// SplitMix64: 64-bit counter-based generator, identical output everywhere.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound) via 128-bit multiply-shift (no modulo bias worth naming).
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

private:
    std::uint64_t state_;
};

enum class SourceKind { ZIPF, UNIFORM, MARKOV1, CONSTANT };

struct SourceSpec {
    SourceKind kind = SourceKind::UNIFORM;
    std::uint32_t n_types = 1;
    double zipf_exponent = 1.0;
    double zipf_offset = 0.0; // Mandelbrot shift q: weights (rank + q)^-s
    double markov_concentration = 0.5;
    std::uint64_t n_tokens = 1;
    std::uint64_t seed = 0;
};

// Deterministic token sequence for the spec; token IDs are 0..V-1 and the
// vocabulary names them by their decimal value.
TokenizedText generate(const SourceSpec& spec);

// Exact entropy of the generating process in bits: unigram entropy for the
// i.i.d. kinds, entropy rate for MARKOV1.
double true_entropy(const SourceSpec& spec);

// Entropy of the stationary unigram distribution of a MARKOV1 spec.
double markov_stationary_unigram_entropy(const SourceSpec& spec);

// Normalized Zipf-Mandelbrot probabilities for the spec.
std::vector<double> zipf_weights(const SourceSpec& spec);

// Row-major V x V transition matrix realized from the spec's seed.
std::vector<double> markov_transition_matrix(const SourceSpec& spec);

} // namespace wordent
