#include "wordent/block_entropy.hpp"
#include "wordent/errors.hpp"
#include "wordent/source_entropy.hpp"
#include "wordent/synthgen.hpp"

#include <doctest.h>

#include <cmath>

using namespace wordent;

TEST_CASE("constant source emits identical tokens") {
    SourceSpec spec;
    spec.kind = SourceKind::CONSTANT;
    spec.n_tokens = 100;
    TokenizedText text = generate(spec);
    REQUIRE(text.size() == 100);
    for (TokenId id : text.tokens) CHECK(id == 0);
    CHECK(true_entropy(spec) == 0.0);
}

TEST_CASE("fixed seed reproduces the exact token stream") {
    SourceSpec spec;
    spec.kind = SourceKind::ZIPF;
    spec.n_types = 1000;
    spec.n_tokens = 5000;
    spec.seed = 42;
    TokenizedText a = generate(spec);
    TokenizedText b = generate(spec);
    CHECK(a.tokens == b.tokens);
    spec.seed = 43;
    CHECK(generate(spec).tokens != a.tokens);
}

TEST_CASE("uniform true entropy is log2 V and ML converges to it") {
    SourceSpec spec;
    spec.kind = SourceKind::UNIFORM;
    spec.n_types = 6;
    spec.n_tokens = 1;
    CHECK(true_entropy(spec) == doctest::Approx(2.5849625007).epsilon(1e-9));

    spec.n_types = 256;
    double expect = 8.0;
    double tol[] = {0.08, 0.01, 0.002};
    std::uint64_t sizes[] = {10000, 100000, 1000000};
    for (int k = 0; k < 3; ++k) {
        spec.n_tokens = sizes[k];
        spec.seed = 7 + static_cast<std::uint64_t>(k);
        double ml = ml_entropy(frequency_table(generate(spec))).bits;
        CHECK(std::abs(ml - expect) < tol[k]);
    }
}

TEST_CASE("zipf ML entropy approaches the analytic distribution entropy") {
    SourceSpec spec;
    spec.kind = SourceKind::ZIPF;
    spec.n_types = 10;
    spec.zipf_exponent = 1.0;
    spec.n_tokens = 1000000;
    spec.seed = 5;
    double truth = true_entropy(spec);
    double ml = ml_entropy(frequency_table(generate(spec))).bits;
    CHECK(std::abs(ml - truth) < 0.01);
}

TEST_CASE("zipf weights are normalized and monotone") {
    SourceSpec spec;
    spec.kind = SourceKind::ZIPF;
    spec.n_types = 100;
    spec.zipf_exponent = 1.3;
    std::vector<double> w = zipf_weights(spec);
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        sum += w[i];
        if (i > 0) CHECK(w[i] < w[i - 1]);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("markov1 transition rows are stochastic and seed-stable") {
    SourceSpec spec;
    spec.kind = SourceKind::MARKOV1;
    spec.n_types = 16;
    spec.n_tokens = 10;
    spec.seed = 3;
    std::vector<double> m = markov_transition_matrix(spec);
    REQUIRE(m.size() == 256);
    for (std::size_t s = 0; s < 16; ++s) {
        double sum = 0.0;
        for (std::size_t t = 0; t < 16; ++t) {
            CHECK(m[s * 16 + t] >= 0.0);
            sum += m[s * 16 + t];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(markov_transition_matrix(spec) == m);
}

TEST_CASE("markov1 doubly-stochastic-like uniform concentration sanity") {
    // with a huge concentration the rows approach uniform and the rate log2 V
    SourceSpec spec;
    spec.kind = SourceKind::MARKOV1;
    spec.n_types = 8;
    spec.markov_concentration = 100000.0;
    spec.n_tokens = 10;
    spec.seed = 9;
    CHECK(std::abs(true_entropy(spec) - 3.0) < 0.01);
}

TEST_CASE("markov1 entropy rate sits below the stationary unigram entropy") {
    SourceSpec spec;
    spec.kind = SourceKind::MARKOV1;
    spec.n_types = 64;
    spec.markov_concentration = 0.5;
    spec.n_tokens = 10;
    spec.seed = 21;
    double rate = true_entropy(spec);
    double unigram = markov_stationary_unigram_entropy(spec);
    CHECK(rate > 0.0);
    CHECK(rate < unigram);
}

TEST_CASE("markov1 sampled statistics approach the exact ones") {
    // concentration 0.1 keeps the rate inside the window where the
    // increasing-window estimator is accurate at this token count
    SourceSpec spec;
    spec.kind = SourceKind::MARKOV1;
    spec.n_types = 64;
    spec.markov_concentration = 0.1;
    spec.n_tokens = 100000;
    spec.seed = 2;
    TokenizedText text = generate(spec);

    double unigram = markov_stationary_unigram_entropy(spec);
    double ml = ml_entropy(frequency_table(text)).bits;
    CHECK(std::abs(ml - unigram) < 0.05);

    double rate = true_entropy(spec);
    double source = source_entropy(text).bits;
    CHECK(std::abs(source - rate) < 0.3);
}

TEST_CASE("spec validation") {
    SourceSpec spec;
    spec.n_types = 0;
    CHECK_THROWS_AS(generate(spec), ConfigError);
    spec.n_types = 4;
    spec.n_tokens = 0;
    CHECK_THROWS_AS(generate(spec), ConfigError);
    spec.n_tokens = 10;
    spec.kind = SourceKind::ZIPF;
    spec.zipf_exponent = 0.0;
    CHECK_THROWS_AS(generate(spec), ConfigError);
    spec.zipf_exponent = 1.0;
    spec.kind = SourceKind::MARKOV1;
    spec.markov_concentration = 0.0;
    CHECK_THROWS_AS(generate(spec), ConfigError);
}
