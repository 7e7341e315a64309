#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wordent {

using TokenId = std::uint32_t;

struct RawDocument {
    std::string source_id;
    std::string content; // UTF-8
};

// Word types interned in first-occurrence order; IDs are dense 0..V-1.
class Vocabulary {
public:
    TokenId intern(std::string_view type);
    std::optional<TokenId> find(std::string_view type) const;
    const std::string& type(TokenId id) const { return id_to_type_.at(id); }
    std::size_t size() const { return id_to_type_.size(); }

private:
    std::unordered_map<std::string, TokenId> type_to_id_;
    std::vector<std::string> id_to_type_;
};

struct TokenizedText {
    std::vector<TokenId> tokens;
    std::shared_ptr<const Vocabulary> vocab;
    std::string source_id;

    std::size_t size() const { return tokens.size(); }
};

// Token counts per type ID; block tables carry the block size they were built with.
struct FrequencyTable {
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;
    std::uint32_t block_size = 1;

    std::uint64_t n_types() const; // number of types with count > 0
};

struct TokenizeOptions {
    bool nfc = false; // apply canonical composition before tokenizing
};

// Splits content into maximal runs of letters/digits (marks kept inside runs),
// lowercased per character. Everything else is a delimiter.
TokenizedText tokenize(const RawDocument& doc, const TokenizeOptions& opts = {});

// Reads a plain-text or verse-per-line ("<id>\t<text>", '#' comments) file.
RawDocument read_verse_file(const std::filesystem::path& path);

FrequencyTable frequency_table(const TokenizedText& text);

// First n tokens; the vocabulary is shared, IDs unchanged.
TokenizedText prefix(const TokenizedText& text, std::size_t n);

} // namespace wordent
