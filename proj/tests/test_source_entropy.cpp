#include "wordent/corpus.hpp"
#include "wordent/errors.hpp"
#include "wordent/source_entropy.hpp"
#include "wordent/synthgen.hpp"

#include <doctest.h>

#include <cmath>

using namespace wordent;

namespace {

TokenizedText from_ids(std::vector<TokenId> ids) {
    auto vocab = std::make_shared<Vocabulary>();
    TokenId max_id = 0;
    for (TokenId id : ids) max_id = std::max(max_id, id);
    for (TokenId id = 0; id <= max_id; ++id) vocab->intern(std::to_string(id));
    TokenizedText text;
    text.tokens = std::move(ids);
    text.vocab = vocab;
    text.source_id = "ids";
    return text;
}

TokenizedText verse_text() {
    return tokenize({"verse",
                     "In the beginning, God created the heavens and the earth. "
                     "And the earth was waste and empty."});
}

} // namespace

TEST_CASE("verse match lengths match the worked example") {
    TokenizedText text = verse_text();
    REQUIRE(text.size() == 17);
    MatchLengthSequence naive = match_lengths_naive(text);
    CHECK(naive.lengths[0] == 1);  // l_1: empty prefix
    CHECK(naive.lengths[2] == 1);  // l_3 "beginning": no match in "in the"
    CHECK(naive.lengths[10] == 4); // l_11 "and": matches "and the earth"
    CHECK(match_lengths_fast(text).lengths == naive.lengths);
}

TEST_CASE("all-distinct tokens give all-ones match lengths") {
    TokenizedText text = from_ids({0, 1, 2, 3, 4, 5});
    for (auto l : match_lengths_naive(text).lengths) CHECK(l == 1);
    for (auto l : match_lengths_fast(text).lengths) CHECK(l == 1);
}

TEST_CASE("constant text match lengths") {
    TokenizedText text = from_ids({0, 0, 0, 0});
    std::vector<std::uint32_t> expect{1, 2, 3, 2};
    CHECK(match_lengths_naive(text).lengths == expect);
    CHECK(match_lengths_fast(text).lengths == expect);
}

TEST_CASE("match length preconditions") {
    TokenizedText empty = from_ids({});
    empty.tokens.clear();
    CHECK_THROWS_AS(match_lengths_naive(empty), PreconditionError);
    CHECK_THROWS_AS(match_lengths_fast(empty), PreconditionError);
}

TEST_CASE("fast equals naive exhaustively on short ternary strings") {
    // all 3^7 sequences of length 7; the acceptance suite pushes this to 3^10
    for (int len = 1; len <= 7; ++len) {
        std::size_t total = 1;
        for (int i = 0; i < len; ++i) total *= 3;
        for (std::size_t code = 0; code < total; ++code) {
            std::vector<TokenId> ids(static_cast<std::size_t>(len));
            std::size_t c = code;
            for (int i = 0; i < len; ++i) {
                ids[static_cast<std::size_t>(i)] = static_cast<TokenId>(c % 3);
                c /= 3;
            }
            TokenizedText text = from_ids(ids);
            REQUIRE(match_lengths_fast(text).lengths == match_lengths_naive(text).lengths);
            REQUIRE(match_lengths_fast(text, {true}).lengths ==
                    match_lengths_naive(text, {true}).lengths);
        }
    }
}

TEST_CASE("fast equals naive on random Zipf texts") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        SourceSpec spec;
        spec.kind = SourceKind::ZIPF;
        spec.n_types = 30;
        spec.zipf_exponent = 1.1;
        spec.n_tokens = 1200;
        spec.seed = seed;
        TokenizedText text = generate(spec);
        CHECK(match_lengths_fast(text).lengths == match_lengths_naive(text).lengths);
        CHECK(match_lengths_fast(text, {true}).lengths ==
              match_lengths_naive(text, {true}).lengths);
    }
}

TEST_CASE("match lengths respect their bounds") {
    SourceSpec spec;
    spec.kind = SourceKind::ZIPF;
    spec.n_types = 10;
    spec.n_tokens = 500;
    spec.seed = 4;
    TokenizedText text = generate(spec);
    MatchLengthSequence m = match_lengths_fast(text);
    std::uint64_t n = m.n_tokens;
    CHECK(m.lengths[0] == 1);
    for (std::uint64_t i = 1; i <= n; ++i) {
        CHECK(m.lengths[i - 1] >= 1);
        CHECK(m.lengths[i - 1] <= i);         // copy fits inside the prefix
        CHECK(m.lengths[i - 1] <= n - i + 2); // match stays inside the text
    }
}

TEST_CASE("growing the window never invalidates earlier matches") {
    // The raw match at position j can only grow when more text arrives, and
    // only because the old value was capped by the text end: truncated to the
    // old window the values agree.
    SplitMix64 rng(77);
    for (int round = 0; round < 20; ++round) {
        std::size_t n = 4 + rng.next_below(40);
        std::vector<TokenId> ids(n);
        for (auto& id : ids) id = static_cast<TokenId>(rng.next_below(3));
        TokenizedText longer = from_ids(ids);
        TokenizedText shorter = longer;
        shorter.tokens.pop_back();

        MatchLengthSequence big = match_lengths_naive(longer);
        MatchLengthSequence small = match_lengths_naive(shorter);
        std::uint64_t m = small.n_tokens;
        for (std::uint64_t j = 1; j <= m; ++j) {
            std::uint64_t raw_big = big.lengths[j - 1] - 1;
            std::uint64_t raw_small = small.lengths[j - 1] - 1;
            CHECK(raw_big >= raw_small);
            CHECK(std::min<std::uint64_t>(raw_big, m - j + 1) == raw_small);
        }
    }
}

TEST_CASE("source entropy of the quad-constant example") {
    TokenizedText text = from_ids({0, 0, 0, 0});
    EntropyEstimate est = source_entropy(text);
    CHECK(est.bits == doctest::Approx(0.5070802084).epsilon(1e-9));
    CHECK(est.estimator == Estimator::SOURCE);
}

TEST_CASE("constant text estimate decreases toward zero") {
    double prev = 10.0;
    for (std::uint64_t n : {100u, 1000u, 10000u}) {
        SourceSpec spec;
        spec.kind = SourceKind::CONSTANT;
        spec.n_tokens = n;
        double bits = source_entropy(generate(spec)).bits;
        CHECK(bits < prev);
        prev = bits;
    }
    CHECK(prev < 0.02);
}

TEST_CASE("source entropy requires two tokens") {
    CHECK_THROWS_AS(source_entropy(from_ids({0})), PreconditionError);
}

TEST_CASE("iid uniform source entropy tracks the true rate at low entropy") {
    SourceSpec spec;
    spec.kind = SourceKind::UNIFORM;
    spec.n_types = 4;
    spec.n_tokens = 100000;
    spec.seed = 3;
    double bits = source_entropy(generate(spec)).bits;
    CHECK(std::abs(bits - 2.0) < 0.3);
}

TEST_CASE("iid high-entropy sources are underestimated at this scale") {
    // The +1 in the match-length definition keeps the estimator finite but
    // costs roughly h^2/log2(N) bits when matches are short; for 256 uniform
    // types at 100K tokens that is still around 1.7 bits. The estimate keeps
    // climbing toward 8 as N grows.
    SourceSpec spec;
    spec.kind = SourceKind::UNIFORM;
    spec.n_types = 256;
    spec.seed = 12;
    double prev = 0.0;
    for (std::uint64_t n : {20000u, 50000u, 100000u}) {
        spec.n_tokens = n;
        double bits = source_entropy(generate(spec)).bits;
        CHECK(bits > prev);
        CHECK(bits < 8.0);
        prev = bits;
    }
    CHECK(prev == doctest::Approx(6.3105).epsilon(1e-3));
}

TEST_CASE("prefix sweep equals per-prefix estimates") {
    SourceSpec spec;
    spec.kind = SourceKind::ZIPF;
    spec.n_types = 40;
    spec.n_tokens = 900;
    spec.seed = 9;
    TokenizedText text = generate(spec);
    std::vector<std::uint64_t> sizes{100, 300, 600, 900};
    std::vector<double> swept = source_entropy_prefix_sweep(text, sizes);
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        double direct = source_entropy(prefix(text, sizes[k])).bits;
        CHECK(swept[k] == doctest::Approx(direct).epsilon(1e-12));
    }
    CHECK_THROWS_AS(source_entropy_prefix_sweep(text, {901}), PreconditionError);
}

TEST_CASE("overlap variant allows runs to match into themselves") {
    TokenizedText text = from_ids({0, 0, 0, 0});
    MatchLengthSequence overlap = match_lengths_fast(text, {true});
    CHECK(overlap.lengths == std::vector<std::uint32_t>{1, 4, 3, 2});
}
