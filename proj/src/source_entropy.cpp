#include "wordent/source_entropy.hpp"

#include "wordent/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wordent {

namespace {

// Insert-only open-addressing map from (state, token) to state.
class TransitionMap {
public:
    explicit TransitionMap(std::size_t expected) {
        std::size_t cap = 16;
        while (cap * 3 < expected * 4) cap <<= 1;
        keys_.assign(cap, kEmpty);
        vals_.resize(cap);
        mask_ = cap - 1;
    }

    // Returns true when the key was not present before.
    bool put(std::uint64_t key, std::int32_t value) {
        if ((size_ + 1) * 4 > (mask_ + 1) * 3) grow();
        std::size_t slot = probe(key);
        bool fresh = keys_[slot] == kEmpty;
        if (fresh) {
            keys_[slot] = key;
            ++size_;
        }
        vals_[slot] = value;
        return fresh;
    }

    std::int32_t get(std::uint64_t key) const {
        std::size_t slot = probe(key);
        return keys_[slot] == kEmpty ? -1 : vals_[slot];
    }

private:
    static constexpr std::uint64_t kEmpty = ~0ull;

    std::size_t probe(std::uint64_t key) const {
        std::uint64_t h = key;
        h ^= h >> 33;
        h *= 0xff51afd7ed558ccdull;
        h ^= h >> 33;
        std::size_t slot = static_cast<std::size_t>(h) & mask_;
        while (keys_[slot] != kEmpty && keys_[slot] != key) slot = (slot + 1) & mask_;
        return slot;
    }

    void grow() {
        std::vector<std::uint64_t> old_keys = std::move(keys_);
        std::vector<std::int32_t> old_vals = std::move(vals_);
        std::size_t cap = (mask_ + 1) * 2;
        keys_.assign(cap, kEmpty);
        vals_.assign(cap, 0);
        mask_ = cap - 1;
        size_ = 0;
        for (std::size_t i = 0; i < old_keys.size(); ++i) {
            if (old_keys[i] != kEmpty) put(old_keys[i], old_vals[i]);
        }
    }

    std::vector<std::uint64_t> keys_;
    std::vector<std::int32_t> vals_;
    std::size_t mask_ = 0;
    std::size_t size_ = 0;
};

// Suffix automaton over token IDs, annotated with the earliest end position
// (1-indexed) of any occurrence of each state's substrings.
class SuffixAutomaton {
public:
    explicit SuffixAutomaton(const std::vector<TokenId>& tokens)
        : trans_(tokens.size() * 4 + 16) {
        len_.reserve(2 * tokens.size() + 2);
        link_.reserve(2 * tokens.size() + 2);
        min_end_.reserve(2 * tokens.size() + 2);
        out_tokens_.reserve(2 * tokens.size() + 2);
        new_state(0, -1);
        std::int32_t last = 0;
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            last = extend(last, tokens[i], static_cast<std::uint32_t>(i + 1));
        }
        aggregate_min_end();
    }

    std::int32_t transition(std::int32_t state, TokenId c) const {
        return trans_.get(key(state, c));
    }

    std::uint32_t len(std::int32_t s) const { return len_[static_cast<std::size_t>(s)]; }
    std::int32_t link(std::int32_t s) const { return link_[static_cast<std::size_t>(s)]; }
    std::uint32_t min_end(std::int32_t s) const { return min_end_[static_cast<std::size_t>(s)]; }

private:
    static std::uint64_t key(std::int32_t state, TokenId c) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(state)) << 32) | c;
    }

    std::int32_t new_state(std::uint32_t len, std::int32_t link) {
        len_.push_back(len);
        link_.push_back(link);
        min_end_.push_back(std::numeric_limits<std::uint32_t>::max());
        out_tokens_.emplace_back();
        return static_cast<std::int32_t>(len_.size() - 1);
    }

    void set_transition(std::int32_t from, TokenId c, std::int32_t to) {
        if (trans_.put(key(from, c), to)) {
            out_tokens_[static_cast<std::size_t>(from)].push_back(c);
        }
    }

    std::int32_t extend(std::int32_t last, TokenId c, std::uint32_t pos) {
        std::int32_t cur = new_state(len_[static_cast<std::size_t>(last)] + 1, -1);
        min_end_[static_cast<std::size_t>(cur)] = pos;
        std::int32_t p = last;
        while (p >= 0 && trans_.get(key(p, c)) < 0) {
            set_transition(p, c, cur);
            p = link_[static_cast<std::size_t>(p)];
        }
        if (p < 0) {
            link_[static_cast<std::size_t>(cur)] = 0;
            return cur;
        }
        std::int32_t q = trans_.get(key(p, c));
        if (len_[static_cast<std::size_t>(p)] + 1 == len_[static_cast<std::size_t>(q)]) {
            link_[static_cast<std::size_t>(cur)] = q;
            return cur;
        }
        std::int32_t clone = new_state(len_[static_cast<std::size_t>(p)] + 1,
                                       link_[static_cast<std::size_t>(q)]);
        for (TokenId tc : out_tokens_[static_cast<std::size_t>(q)]) {
            set_transition(clone, tc, trans_.get(key(q, tc)));
        }
        link_[static_cast<std::size_t>(q)] = clone;
        link_[static_cast<std::size_t>(cur)] = clone;
        while (p >= 0 && trans_.get(key(p, c)) == q) {
            set_transition(p, c, clone);
            p = link_[static_cast<std::size_t>(p)];
        }
        return cur;
    }

    // Fold min_end up the suffix-link tree: a state's substrings occur
    // wherever any longer extension occurs. Counting sort by len stands in
    // for a topological order (link len is strictly smaller).
    void aggregate_min_end() {
        std::size_t n_states = len_.size();
        std::uint32_t max_len = 0;
        for (auto l : len_) max_len = std::max(max_len, l);
        std::vector<std::uint32_t> start(max_len + 2, 0);
        for (auto l : len_) ++start[l + 1];
        for (std::size_t i = 1; i < start.size(); ++i) start[i] += start[i - 1];
        std::vector<std::int32_t> order(n_states);
        for (std::size_t s = 0; s < n_states; ++s) {
            order[start[len_[s]]++] = static_cast<std::int32_t>(s);
        }
        for (std::size_t i = n_states; i-- > 1;) {
            std::int32_t s = order[i];
            std::int32_t p = link_[static_cast<std::size_t>(s)];
            if (p >= 0) {
                auto& parent = min_end_[static_cast<std::size_t>(p)];
                parent = std::min(parent, min_end_[static_cast<std::size_t>(s)]);
            }
        }
    }

    TransitionMap trans_;
    std::vector<std::uint32_t> len_;
    std::vector<std::int32_t> link_;
    std::vector<std::uint32_t> min_end_;
    std::vector<std::vector<TokenId>> out_tokens_;
};

void check_nonempty(const TokenizedText& text) {
    if (text.size() == 0) throw PreconditionError("match lengths require at least one token");
}

} // namespace

MatchLengthSequence match_lengths_naive(const TokenizedText& text, MatchOptions opts) {
    check_nonempty(text);
    std::size_t n = text.size();
    const auto& t = text.tokens;
    MatchLengthSequence out;
    out.n_tokens = n;
    out.lengths.resize(n);
    for (std::size_t i = 1; i <= n; ++i) { // 1-indexed position
        std::size_t best = 0;
        for (std::size_t j = 1; j < i; ++j) {
            std::size_t cap = n - i + 1; // the matched string stays inside the text
            if (!opts.allow_overlap) cap = std::min(cap, i - j); // copy ends before i
            std::size_t l = 0;
            while (l < cap && t[j - 1 + l] == t[i - 1 + l]) ++l;
            best = std::max(best, l);
        }
        out.lengths[i - 1] = static_cast<std::uint32_t>(best + 1);
    }
    return out;
}

MatchLengthSequence match_lengths_fast(const TokenizedText& text, MatchOptions opts) {
    check_nonempty(text);
    std::size_t n = text.size();
    const auto& t = text.tokens;
    SuffixAutomaton sam(t);

    MatchLengthSequence out;
    out.n_tokens = n;
    out.lengths.resize(n);

    // Matching-statistics walk: (state, length) tracks the longest usable
    // match t[i..i+length-1]; advancing i drops the front token, so the total
    // number of extensions is linear in n.
    std::int32_t state = 0;
    std::uint32_t length = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        while (length < n - i + 1) {
            TokenId c = t[i - 1 + length];
            std::int32_t next = sam.transition(state, c);
            if (next < 0) break;
            // The extended match is usable iff some occurrence of it fits the
            // window for position i; min_end gives the earliest occurrence.
            std::uint64_t earliest = sam.min_end(next);
            std::uint64_t bound =
                opts.allow_overlap ? static_cast<std::uint64_t>(i - 1) + length : i - 1;
            if (earliest > bound) break;
            state = next;
            ++length;
        }
        out.lengths[i - 1] = length + 1;
        if (length > 0) {
            --length;
            if (length == 0) {
                state = 0;
            } else {
                while (state != 0 && sam.len(sam.link(state)) >= length) state = sam.link(state);
            }
        }
    }
    return out;
}

double source_entropy_from_lengths(const MatchLengthSequence& m) {
    if (m.n_tokens < 2) throw PreconditionError("source entropy requires at least 2 tokens");
    double acc = 0.0;
    for (std::uint64_t i = 2; i <= m.n_tokens; ++i) {
        acc += std::log2(static_cast<double>(i)) / m.lengths[i - 1];
    }
    return acc / static_cast<double>(m.n_tokens);
}

EntropyEstimate source_entropy(const TokenizedText& text, MatchOptions opts) {
    if (text.size() < 2) throw PreconditionError("source entropy requires at least 2 tokens");
    MatchLengthSequence m = match_lengths_fast(text, opts);
    FrequencyTable table = frequency_table(text);
    return {source_entropy_from_lengths(m), Estimator::SOURCE, text.size(), table.n_types(), 1};
}

std::vector<double> source_entropy_prefix_sweep(const TokenizedText& text,
                                                const std::vector<std::uint64_t>& prefix_sizes,
                                                MatchOptions opts) {
    check_nonempty(text);
    for (auto m : prefix_sizes) {
        if (m < 2 || m > text.size()) {
            throw PreconditionError("prefix size " + std::to_string(m) + " out of range");
        }
    }
    MatchLengthSequence full = match_lengths_fast(text, opts);

    std::vector<double> out;
    out.reserve(prefix_sizes.size());
    for (std::uint64_t m : prefix_sizes) {
        double acc = 0.0;
        for (std::uint64_t i = 2; i <= m; ++i) {
            // Match values computed on the full text only ever exceed the
            // per-prefix ones by running past the prefix end; re-cap them.
            std::uint64_t raw = full.lengths[i - 1] - 1;
            std::uint64_t capped = std::min<std::uint64_t>(raw, m - i + 1);
            acc += std::log2(static_cast<double>(i)) / static_cast<double>(capped + 1);
        }
        out.push_back(acc / static_cast<double>(m));
    }
    return out;
}

} // namespace wordent
