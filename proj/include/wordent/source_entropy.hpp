#pragma once

#include "wordent/block_entropy.hpp"
#include "wordent/corpus.hpp"

#include <cstdint>
#include <vector>

namespace wordent {

// l_i values, 1-indexed positions; lengths[i-1] = 1 + longest match of the
// string starting at i against material inside the preceding prefix.
struct MatchLengthSequence {
    std::vector<std::uint32_t> lengths;
    std::uint64_t n_tokens = 0;
};

struct MatchOptions {
    // Default: the matched copy must lie fully inside the prefix (end <= i-1).
    // When set, the copy only has to start inside it and may overlap the
    // string being matched.
    bool allow_overlap = false;
};

// Direct quadratic scan; the correctness oracle for the fast path.
MatchLengthSequence match_lengths_naive(const TokenizedText& text, MatchOptions opts = {});

// Suffix-automaton path; identical output to the naive scan on every input.
MatchLengthSequence match_lengths_fast(const TokenizedText& text, MatchOptions opts = {});

// Increasing-window estimate (1/N) sum_{i=2..N} log2(i)/l_i over fast lengths.
EntropyEstimate source_entropy(const TokenizedText& text, MatchOptions opts = {});

double source_entropy_from_lengths(const MatchLengthSequence& lengths);

// Estimates for every prefix size in one pass: match lengths computed on the
// full text are re-capped per prefix (the window only ever grows).
std::vector<double> source_entropy_prefix_sweep(const TokenizedText& text,
                                                const std::vector<std::uint64_t>& prefix_sizes,
                                                MatchOptions opts = {});

} // namespace wordent
