#include "wordent/block_entropy.hpp"

#include "wordent/errors.hpp"

#include <boost/math/special_functions/digamma.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>
#include <vector>

namespace wordent {

namespace {

constexpr double kLn2 = std::numbers::ln2;

double digamma(double x) { return boost::math::digamma(x); }

// (count value, number of types with that count); zero-count cell included
// when the alphabet is larger than the observed vocabulary.
struct CountHistogram {
    std::vector<std::pair<double, double>> bins; // (count, multiplicity)
    double n_tokens = 0;
    double n_observed_types = 0;
};

CountHistogram collapse_counts(const FrequencyTable& table, double alphabet_size) {
    std::map<std::uint64_t, double> mult;
    std::uint64_t total = 0;
    for (auto c : table.counts) {
        if (c == 0) continue;
        mult[c] += 1.0;
        total += c;
    }
    CountHistogram h;
    h.n_tokens = static_cast<double>(total);
    for (auto& [c, m] : mult) {
        h.bins.emplace_back(static_cast<double>(c), m);
        h.n_observed_types += m;
    }
    if (alphabet_size > h.n_observed_types) {
        h.bins.emplace_back(0.0, alphabet_size - h.n_observed_types);
    }
    return h;
}

// Posterior expected entropy at fixed concentration beta, in nats.
double posterior_mean_entropy(const CountHistogram& h, double k, double beta) {
    double nk = h.n_tokens + k * beta;
    double acc = 0.0;
    for (auto& [c, m] : h.bins) {
        acc += m * (c + beta) * digamma(c + beta + 1.0);
    }
    return digamma(nk + 1.0) - acc / nk;
}

// Log marginal likelihood of the counts at fixed beta (constant factors dropped).
double log_evidence(const CountHistogram& h, double k, double beta) {
    double acc = std::lgamma(k * beta) - std::lgamma(h.n_tokens + k * beta);
    double lgb = std::lgamma(beta);
    for (auto& [c, m] : h.bins) {
        if (c > 0) acc += m * (std::lgamma(c + beta) - lgb);
    }
    return acc;
}

// Invert xi(beta) = psi(K beta + 1) - psi(beta + 1), monotone in beta.
double beta_for_xi(double xi, double k) {
    double lo = 1e-12, hi = 1e14;
    for (int it = 0; it < 200; ++it) {
        double mid = std::sqrt(lo * hi);
        double v = digamma(k * mid + 1.0) - digamma(mid + 1.0);
        if (v < xi)
            lo = mid;
        else
            hi = mid;
        if (hi / lo < 1.0 + 1e-14) break;
    }
    return std::sqrt(lo * hi);
}

// Simpson average of <H> weighted by the evidence, over a uniform xi grid.
double nsb_quadrature(const CountHistogram& h, double k, int nodes) {
    double ln_k = std::log(k);
    std::vector<double> hs(static_cast<std::size_t>(nodes));
    std::vector<double> logw(static_cast<std::size_t>(nodes));
    double step = ln_k / (nodes - 1);
    for (int i = 0; i < nodes; ++i) {
        double beta = beta_for_xi(step * i, k);
        hs[static_cast<std::size_t>(i)] = posterior_mean_entropy(h, k, beta);
        logw[static_cast<std::size_t>(i)] = log_evidence(h, k, beta);
    }
    double wmax = *std::max_element(logw.begin(), logw.end());
    double num = 0.0, den = 0.0;
    for (int i = 0; i < nodes; ++i) {
        double sw = (i == 0 || i == nodes - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        double w = sw * std::exp(logw[static_cast<std::size_t>(i)] - wmax);
        num += w * hs[static_cast<std::size_t>(i)];
        den += w;
    }
    return num / den;
}

} // namespace

const char* estimator_name(Estimator e) {
    switch (e) {
    case Estimator::ML: return "ml";
    case Estimator::NSB: return "nsb";
    case Estimator::SOURCE: return "source";
    case Estimator::MILLER_MADOW: return "miller_madow";
    }
    return "?";
}

EntropyEstimate ml_entropy(const FrequencyTable& table) {
    if (table.total == 0) throw PreconditionError("ml_entropy requires at least one token");
    double n = static_cast<double>(table.total);
    double h = 0.0;
    std::uint64_t v = 0;
    for (auto c : table.counts) {
        if (c == 0) continue;
        double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
        ++v;
    }
    return {std::max(h, 0.0), Estimator::ML, table.total, v, table.block_size};
}

FrequencyTable ngram_table(const TokenizedText& text, std::uint32_t n) {
    if (n < 1) throw PreconditionError("block size must be >= 1");
    if (text.size() < n) {
        throw PreconditionError("text has " + std::to_string(text.size()) +
                                " tokens, need at least " + std::to_string(n));
    }
    struct VecHash {
        std::size_t operator()(const std::vector<TokenId>& v) const {
            std::size_t h = 1469598103934665603ull;
            for (TokenId t : v) {
                h ^= t;
                h *= 1099511628211ull;
            }
            return h;
        }
    };
    std::unordered_map<std::vector<TokenId>, std::uint32_t, VecHash> block_ids;
    FrequencyTable table;
    table.block_size = n;
    std::vector<TokenId> block(n);
    for (std::size_t i = 0; i + n <= text.size(); ++i) {
        std::copy(text.tokens.begin() + static_cast<std::ptrdiff_t>(i),
                  text.tokens.begin() + static_cast<std::ptrdiff_t>(i + n), block.begin());
        auto [it, inserted] =
            block_ids.emplace(block, static_cast<std::uint32_t>(block_ids.size()));
        if (inserted) table.counts.push_back(0);
        ++table.counts[it->second];
        ++table.total;
    }
    return table;
}

EntropyEstimate nsb_entropy(const FrequencyTable& table, const NsbConfig& cfg) {
    if (table.total == 0) throw PreconditionError("nsb_entropy requires at least one token");
    if (cfg.quadrature_nodes < 17 || cfg.quadrature_nodes % 2 == 0) {
        throw ConfigError("quadrature_nodes must be odd and >= 17");
    }
    if (cfg.relative_tolerance <= 0) throw ConfigError("relative_tolerance must be > 0");

    std::uint64_t observed = table.n_types();
    std::uint64_t k = cfg.alphabet_size == 0 ? observed : cfg.alphabet_size;
    if (k < observed) {
        throw ConfigError("alphabet size " + std::to_string(k) +
                          " is smaller than the observed " + std::to_string(observed) +
                          " types");
    }

    EntropyEstimate est{0.0, Estimator::NSB, table.total, observed, table.block_size};
    if (k == 1) return est; // one-symbol alphabet: entropy is exactly zero

    CountHistogram h = collapse_counts(table, static_cast<double>(k));
    double kd = static_cast<double>(k);

    // Refine by interval doubling until the change falls under the tolerance.
    int nodes = cfg.quadrature_nodes;
    double prev = nsb_quadrature(h, kd, nodes);
    double residual = std::numeric_limits<double>::infinity();
    for (int level = 0; level < 6; ++level) {
        nodes = nodes * 2 - 1;
        double next = nsb_quadrature(h, kd, nodes);
        residual = std::abs(next - prev) / std::max(std::abs(next), 1e-12);
        prev = next;
        if (residual <= cfg.relative_tolerance) {
            est.bits = std::max(prev / kLn2, 0.0);
            return est;
        }
    }
    throw NumericError("NSB quadrature did not converge: residual " +
                           std::to_string(residual) + " > tolerance " +
                           std::to_string(cfg.relative_tolerance),
                       residual);
}

EntropyEstimate miller_madow_entropy(const FrequencyTable& table) {
    EntropyEstimate est = ml_entropy(table);
    est.estimator = Estimator::MILLER_MADOW;
    double v = static_cast<double>(est.n_types);
    est.bits += (v - 1.0) / (2.0 * static_cast<double>(est.n_tokens) * kLn2);
    return est;
}

} // namespace wordent
