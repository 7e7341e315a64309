#include "wordent/corpus.hpp"
#include "wordent/errors.hpp"
#include "wordent/synthgen.hpp"
#include "wordent/unicode.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace wordent;

namespace {

std::vector<std::string> token_strings(const TokenizedText& text) {
    std::vector<std::string> out;
    for (TokenId id : text.tokens) out.push_back(text.vocab->type(id));
    return out;
}

// The paper's first verse, 17 tokens.
const char* kVerse =
    "In the beginning, God created the heavens and the earth. "
    "And the earth was waste and empty.";

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& content, const char* name = "wordent_test.txt") {
        path = std::filesystem::temp_directory_path() / name;
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    ~TempFile() { std::filesystem::remove(path); }
};

} // namespace

TEST_CASE("tokenize splits on whitespace and punctuation, lowercases") {
    RawDocument doc{"t", "In the beginning, God created the heavens and the earth"};
    TokenizedText text = tokenize(doc);
    CHECK(token_strings(text) ==
          std::vector<std::string>{"in", "the", "beginning", "god", "created", "the",
                                   "heavens", "and", "the", "earth"});
    CHECK(text.size() == 10);
    CHECK(text.vocab->size() == 8);
}

TEST_CASE("tokenize of empty input") {
    TokenizedText text = tokenize({"t", ""});
    CHECK(text.size() == 0);
    CHECK(text.vocab->size() == 0);
}

TEST_CASE("tokenize collapses repeated delimiters") {
    TokenizedText text = tokenize({"t", "Hello,   WORLD!!"});
    CHECK(token_strings(text) == std::vector<std::string>{"hello", "world"});
}

TEST_CASE("tokenize keeps digits and mixed alphanumerics as single tokens") {
    TokenizedText text = tokenize({"t", "the 2nd week of 1999"});
    CHECK(token_strings(text) == std::vector<std::string>{"the", "2nd", "week", "of", "1999"});
}

TEST_CASE("tokenize keeps combining marks attached to letters") {
    // "cafe" + U+0301 combining acute on the e
    TokenizedText text = tokenize({"t", "cafe\xcc\x81 time"});
    auto toks = token_strings(text);
    REQUIRE(toks.size() == 2);
    CHECK(toks[0] == "cafe\xcc\x81");
    CHECK(toks[1] == "time");
}

TEST_CASE("leading combining mark acts as a delimiter") {
    // mark with no base letter before it
    TokenizedText text = tokenize({"t", "\xcc\x81go"});
    CHECK(token_strings(text) == std::vector<std::string>{"go"});
}

TEST_CASE("NFC option composes decomposed sequences") {
    RawDocument doc{"t", "cafe\xcc\x81"};
    TokenizedText plain = tokenize(doc);
    TokenizedText composed = tokenize(doc, TokenizeOptions{true});
    CHECK(plain.vocab->type(plain.tokens[0]) == "cafe\xcc\x81");
    CHECK(composed.vocab->type(composed.tokens[0]) == "caf\xc3\xa9");
}

TEST_CASE("tokenize rejects invalid UTF-8 with a byte offset") {
    RawDocument doc{"t", std::string("abc \xff def")};
    try {
        tokenize(doc);
        FAIL("expected IngestError");
    } catch (const IngestError& e) {
        CHECK(e.byte_offset() == 4);
    }
}

TEST_CASE("tokenize handles non-Latin scripts") {
    TokenizedText text = tokenize({"t", "\xce\x9a\xce\xb1\xce\xb9 \xcf\x84\xce\xbf"}); // Και το
    auto toks = token_strings(text);
    REQUIRE(toks.size() == 2);
    CHECK(toks[0] == "\xce\xba\xce\xb1\xce\xb9"); // και lowercased
}

TEST_CASE("tokenize is idempotent on its own output") {
    SplitMix64 rng(11);
    for (int round = 0; round < 30; ++round) {
        // random mix of letters, digits, punctuation, spaces, some multibyte
        std::string s;
        const char* pool[] = {"a", "B",  "c",  "3",  ".", ",", "!", " ", "  ", "\t",
                              "\n", "\xc3\xa9", "\xce\xb2", "-", "_", "'", "x9", "Q"};
        int len = static_cast<int>(rng.next_below(60));
        for (int i = 0; i < len; ++i) {
            s += pool[rng.next_below(std::size(pool))];
        }
        TokenizedText once = tokenize({"t", s});
        std::string joined;
        for (TokenId id : once.tokens) {
            if (!joined.empty()) joined += ' ';
            joined += once.vocab->type(id);
        }
        TokenizedText twice = tokenize({"t", joined});
        CHECK(token_strings(once) == token_strings(twice));
    }
}

TEST_CASE("tokens never contain delimiters or uppercase") {
    SplitMix64 rng(23);
    for (int round = 0; round < 50; ++round) {
        std::string s;
        int len = static_cast<int>(rng.next_below(40));
        for (int i = 0; i < len; ++i) {
            // random codepoints from a few blocks, plus ascii noise
            std::uint64_t pick = rng.next_below(4);
            char32_t c;
            if (pick == 0) c = static_cast<char32_t>(0x20 + rng.next_below(0x5f));
            else if (pick == 1) c = static_cast<char32_t>(0xc0 + rng.next_below(0x100));
            else if (pick == 2) c = static_cast<char32_t>(0x370 + rng.next_below(0x80));
            else c = static_cast<char32_t>(0x4e00 + rng.next_below(0x200));
            uni::append_utf8(s, c);
        }
        TokenizedText text = tokenize({"t", s});
        for (TokenId id : text.tokens) {
            const std::string& type = text.vocab->type(id);
            CHECK(!type.empty());
            bool first = true;
            uni::for_each_codepoint(type, [&](char32_t c, std::size_t) {
                if (first) {
                    CHECK(uni::is_word_char(c));
                    first = false;
                } else {
                    CHECK((uni::is_word_char(c) || uni::is_mark(c)));
                }
                CHECK(uni::to_lower_simple(c) == c);
            });
        }
    }
}

TEST_CASE("vocabulary is dense, bijective, first-occurrence ordered") {
    TokenizedText text = tokenize({"t", "b a b c a d"});
    REQUIRE(text.vocab->size() == 4);
    CHECK(text.vocab->type(0) == "b");
    CHECK(text.vocab->type(1) == "a");
    CHECK(text.vocab->type(2) == "c");
    CHECK(text.vocab->type(3) == "d");
    for (TokenId id = 0; id < 4; ++id) {
        CHECK(text.vocab->find(text.vocab->type(id)) == id);
    }
}

TEST_CASE("read_verse_file extracts text after tabs and skips comments") {
    TempFile f("# comment\n01001001\tIn the beginning\n", "wordent_verse1.txt");
    RawDocument doc = read_verse_file(f.path);
    CHECK(doc.content == "In the beginning");
    CHECK(doc.source_id == "wordent_verse1");
}

TEST_CASE("read_verse_file joins verse lines with single spaces") {
    TempFile f("01\tIn the beginning\n02\tGod created\n", "wordent_verse2.txt");
    CHECK(read_verse_file(f.path).content == "In the beginning God created");
}

TEST_CASE("read_verse_file passes plain text through") {
    TempFile f("a b c", "wordent_plain.txt");
    CHECK(read_verse_file(f.path).content == "a b c");
}

TEST_CASE("read_verse_file errors") {
    CHECK_THROWS_AS(read_verse_file("/nonexistent/file.txt"), IoError);
    TempFile f(std::string("01\tok\n02\tbad\xff\n"), "wordent_bad.txt");
    CHECK_THROWS_AS(read_verse_file(f.path), IngestError);
}

TEST_CASE("frequency_table counts the verse") {
    TokenizedText text = tokenize({"t", kVerse});
    REQUIRE(text.size() == 17);
    FrequencyTable table = frequency_table(text);
    CHECK(table.total == 17);
    CHECK(table.n_types() == 11);
    CHECK(table.counts[*text.vocab->find("the")] == 4);
    CHECK(table.counts[*text.vocab->find("and")] == 3);
    CHECK(table.counts[*text.vocab->find("earth")] == 2);
    CHECK(table.counts[*text.vocab->find("god")] == 1);
}

TEST_CASE("frequency_table of empty and constant texts") {
    FrequencyTable empty = frequency_table(tokenize({"t", ""}));
    CHECK(empty.total == 0);
    CHECK(empty.n_types() == 0);

    FrequencyTable aaa = frequency_table(tokenize({"t", "a a a"}));
    CHECK(aaa.total == 3);
    CHECK(aaa.counts == std::vector<std::uint64_t>{3});
}

TEST_CASE("frequency totals equal token counts") {
    SplitMix64 rng(5);
    for (int round = 0; round < 20; ++round) {
        SourceSpec spec;
        spec.kind = SourceKind::ZIPF;
        spec.n_types = 50;
        spec.n_tokens = 1 + rng.next_below(500);
        spec.seed = round;
        TokenizedText text = generate(spec);
        CHECK(frequency_table(text).total == text.size());
    }
}

TEST_CASE("prefix basics") {
    TokenizedText text = tokenize({"t", kVerse});
    CHECK(prefix(text, 0).size() == 0);
    CHECK(prefix(text, text.size()).tokens == text.tokens);
    TokenizedText two = prefix(text, 2);
    CHECK(token_strings(two) == std::vector<std::string>{"in", "the"});
    CHECK(two.vocab == text.vocab); // shared, IDs unchanged
    CHECK_THROWS_AS(prefix(text, 18), PreconditionError);
}

TEST_CASE("prefix then frequency_table totals n") {
    TokenizedText text = tokenize({"t", kVerse});
    for (std::size_t n : {0u, 1u, 5u, 17u}) {
        CHECK(frequency_table(prefix(text, n)).total == n);
    }
}
