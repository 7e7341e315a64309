#include "wordent/synthgen.hpp"

#include "wordent/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace wordent {

namespace {

// Vose alias table for O(1) sampling from a fixed discrete distribution.
class AliasTable {
public:
    explicit AliasTable(const std::vector<double>& probs) {
        std::size_t n = probs.size();
        prob_.resize(n);
        alias_.assign(n, 0);
        std::vector<std::uint32_t> small, large;
        std::vector<double> scaled(n);
        for (std::size_t i = 0; i < n; ++i) {
            scaled[i] = probs[i] * static_cast<double>(n);
            (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
        }
        while (!small.empty() && !large.empty()) {
            std::uint32_t s = small.back();
            std::uint32_t l = large.back();
            small.pop_back();
            large.pop_back();
            prob_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            (scaled[l] < 1.0 ? small : large).push_back(l);
        }
        for (auto i : large) prob_[i] = 1.0;
        for (auto i : small) prob_[i] = 1.0;
    }

    std::uint32_t sample(SplitMix64& rng) const {
        std::uint32_t k = static_cast<std::uint32_t>(rng.next_below(prob_.size()));
        return rng.next_double() < prob_[k] ? k : alias_[k];
    }

private:
    std::vector<double> prob_;
    std::vector<std::uint32_t> alias_;
};

double sample_normal(SplitMix64& rng) {
    // Box-Muller; u1 kept away from zero.
    double u1 = rng.next_double();
    double u2 = rng.next_double();
    if (u1 <= 0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Marsaglia-Tsang gamma sampler; shapes below 1 boosted via Gamma(a+1) U^(1/a).
double sample_gamma(SplitMix64& rng, double shape) {
    if (shape < 1.0) {
        double u = rng.next_double();
        if (u <= 0) u = 0x1.0p-53;
        return sample_gamma(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = sample_normal(rng);
        double v = 1.0 + c * x;
        if (v <= 0) continue;
        v = v * v * v;
        double u = rng.next_double();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

void validate(const SourceSpec& spec) {
    if (spec.n_types < 1) throw ConfigError("type count must be >= 1");
    if (spec.n_tokens < 1) throw ConfigError("token count must be >= 1");
    if (spec.kind == SourceKind::ZIPF && spec.zipf_exponent <= 0) {
        throw ConfigError("Zipf exponent must be > 0");
    }
    if (spec.kind == SourceKind::ZIPF && spec.zipf_offset < 0) {
        throw ConfigError("Zipf offset must be >= 0");
    }
    if (spec.kind == SourceKind::MARKOV1) {
        if (spec.markov_concentration <= 0) {
            throw ConfigError("Markov concentration must be > 0");
        }
        if (spec.n_types > 4096) {
            throw ConfigError("MARKOV1 supports at most 4096 states");
        }
    }
}

std::shared_ptr<const Vocabulary> numeric_vocab(std::uint32_t v) {
    auto vocab = std::make_shared<Vocabulary>();
    for (std::uint32_t i = 0; i < v; ++i) vocab->intern(std::to_string(i));
    return vocab;
}

std::vector<double> stationary_distribution(const std::vector<double>& matrix,
                                            std::uint32_t v) {
    std::vector<double> pi(v, 1.0 / v), next(v);
    for (int it = 0; it < 200000; ++it) {
        for (std::uint32_t t = 0; t < v; ++t) next[t] = 0.0;
        for (std::uint32_t s = 0; s < v; ++s) {
            double ps = pi[s];
            const double* row = matrix.data() + static_cast<std::size_t>(s) * v;
            for (std::uint32_t t = 0; t < v; ++t) next[t] += ps * row[t];
        }
        double diff = 0.0;
        for (std::uint32_t t = 0; t < v; ++t) diff += std::abs(next[t] - pi[t]);
        pi.swap(next);
        if (diff < 1e-15) break;
    }
    return pi;
}

double entropy_bits(const std::vector<double>& probs) {
    double h = 0.0;
    for (double p : probs) {
        if (p > 0) h -= p * std::log2(p);
    }
    return h;
}

} // namespace

std::vector<double> zipf_weights(const SourceSpec& spec) {
    std::vector<double> w(spec.n_types);
    double z = 0.0;
    for (std::uint32_t i = 0; i < spec.n_types; ++i) {
        w[i] = std::pow(static_cast<double>(i + 1) + spec.zipf_offset, -spec.zipf_exponent);
        z += w[i];
    }
    for (auto& x : w) x /= z;
    return w;
}

std::vector<double> markov_transition_matrix(const SourceSpec& spec) {
    validate(spec);
    std::uint32_t v = spec.n_types;
    // Distinct stream from the token stream so emission order cannot change
    // the realized matrix.
    SplitMix64 rng(spec.seed ^ 0x6d61726b6f763166ull);
    std::vector<double> matrix(static_cast<std::size_t>(v) * v);
    for (std::uint32_t s = 0; s < v; ++s) {
        double* row = matrix.data() + static_cast<std::size_t>(s) * v;
        double sum = 0.0;
        for (std::uint32_t t = 0; t < v; ++t) {
            row[t] = sample_gamma(rng, spec.markov_concentration);
            sum += row[t];
        }
        for (std::uint32_t t = 0; t < v; ++t) row[t] /= sum;
    }
    return matrix;
}

TokenizedText generate(const SourceSpec& spec) {
    validate(spec);
    TokenizedText out;
    out.source_id = "synthetic";
    out.vocab = numeric_vocab(spec.n_types);
    out.tokens.reserve(spec.n_tokens);
    SplitMix64 rng(spec.seed);

    switch (spec.kind) {
    case SourceKind::CONSTANT: {
        out.tokens.assign(spec.n_tokens, 0);
        out.vocab = numeric_vocab(1);
        break;
    }
    case SourceKind::UNIFORM: {
        for (std::uint64_t i = 0; i < spec.n_tokens; ++i) {
            out.tokens.push_back(static_cast<TokenId>(rng.next_below(spec.n_types)));
        }
        break;
    }
    case SourceKind::ZIPF: {
        AliasTable alias(zipf_weights(spec));
        for (std::uint64_t i = 0; i < spec.n_tokens; ++i) {
            out.tokens.push_back(alias.sample(rng));
        }
        break;
    }
    case SourceKind::MARKOV1: {
        std::vector<double> matrix = markov_transition_matrix(spec);
        std::uint32_t v = spec.n_types;
        std::vector<AliasTable> rows;
        rows.reserve(v);
        for (std::uint32_t s = 0; s < v; ++s) {
            rows.emplace_back(std::vector<double>(
                matrix.begin() + static_cast<std::ptrdiff_t>(s) * v,
                matrix.begin() + static_cast<std::ptrdiff_t>(s + 1) * v));
        }
        // Start from the stationary distribution so unigram statistics are
        // unbiased from the first token.
        std::vector<double> pi = stationary_distribution(matrix, v);
        AliasTable start(pi);
        std::uint32_t state = start.sample(rng);
        out.tokens.push_back(state);
        for (std::uint64_t i = 1; i < spec.n_tokens; ++i) {
            state = rows[state].sample(rng);
            out.tokens.push_back(state);
        }
        break;
    }
    }
    return out;
}

double true_entropy(const SourceSpec& spec) {
    validate(spec);
    switch (spec.kind) {
    case SourceKind::CONSTANT:
        return 0.0;
    case SourceKind::UNIFORM:
        return std::log2(static_cast<double>(spec.n_types));
    case SourceKind::ZIPF:
        return entropy_bits(zipf_weights(spec));
    case SourceKind::MARKOV1: {
        std::vector<double> matrix = markov_transition_matrix(spec);
        std::vector<double> pi = stationary_distribution(matrix, spec.n_types);
        double h = 0.0;
        for (std::uint32_t s = 0; s < spec.n_types; ++s) {
            const double* row = matrix.data() + static_cast<std::size_t>(s) * spec.n_types;
            for (std::uint32_t t = 0; t < spec.n_types; ++t) {
                if (row[t] > 0) h -= pi[s] * row[t] * std::log2(row[t]);
            }
        }
        return h;
    }
    }
    return 0.0;
}

double markov_stationary_unigram_entropy(const SourceSpec& spec) {
    if (spec.kind != SourceKind::MARKOV1) {
        throw ConfigError("stationary unigram entropy is defined for MARKOV1 specs");
    }
    std::vector<double> matrix = markov_transition_matrix(spec);
    return entropy_bits(stationary_distribution(matrix, spec.n_types));
}

} // namespace wordent
