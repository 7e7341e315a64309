#include "wordent/corpus.hpp"

#include "wordent/errors.hpp"
#include "wordent/unicode.hpp"

#include <fstream>
#include <sstream>

namespace wordent {

TokenId Vocabulary::intern(std::string_view type) {
    auto it = type_to_id_.find(std::string(type));
    if (it != type_to_id_.end()) return it->second;
    TokenId id = static_cast<TokenId>(id_to_type_.size());
    id_to_type_.emplace_back(type);
    type_to_id_.emplace(id_to_type_.back(), id);
    return id;
}

std::optional<TokenId> Vocabulary::find(std::string_view type) const {
    auto it = type_to_id_.find(std::string(type));
    if (it == type_to_id_.end()) return std::nullopt;
    return it->second;
}

std::uint64_t FrequencyTable::n_types() const {
    std::uint64_t v = 0;
    for (auto c : counts)
        if (c > 0) ++v;
    return v;
}

TokenizedText tokenize(const RawDocument& doc, const TokenizeOptions& opts) {
    uni::validate_utf8(doc.content);
    const std::string* content = &doc.content;
    std::string normalized;
    if (opts.nfc) {
        normalized = uni::nfc(doc.content);
        content = &normalized;
    }

    auto vocab = std::make_shared<Vocabulary>();
    TokenizedText out;
    out.source_id = doc.source_id;

    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            out.tokens.push_back(vocab->intern(current));
            current.clear();
        }
    };

    uni::for_each_codepoint(*content, [&](char32_t c, std::size_t) {
        if (uni::is_word_char(c) || (!current.empty() && uni::is_mark(c))) {
            uni::append_utf8(current, uni::to_lower_simple(c));
        } else {
            flush();
        }
    });
    flush();

    out.vocab = std::move(vocab);
    return out;
}

RawDocument read_verse_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path.string());
    std::string raw = std::move(buf).str();
    uni::validate_utf8(raw);

    // Verse format iff some non-comment line carries a TAB; otherwise plain text.
    std::vector<std::string_view> lines;
    std::string_view rest = raw;
    while (!rest.empty()) {
        auto nl = rest.find('\n');
        std::string_view line = rest.substr(0, nl);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (nl == std::string_view::npos) break;
        rest.remove_prefix(nl + 1);
    }

    bool has_tab = false;
    for (auto line : lines) {
        if (!line.empty() && line.front() == '#') continue;
        if (line.find('\t') != std::string_view::npos) {
            has_tab = true;
            break;
        }
    }

    RawDocument doc;
    doc.source_id = path.stem().string();
    if (!has_tab) {
        doc.content = std::move(raw);
        return doc;
    }
    for (auto line : lines) {
        if (!line.empty() && line.front() == '#') continue;
        auto tab = line.find('\t');
        std::string_view text = tab == std::string_view::npos ? line : line.substr(tab + 1);
        if (text.empty()) continue;
        if (!doc.content.empty()) doc.content += ' ';
        doc.content += text;
    }
    return doc;
}

FrequencyTable frequency_table(const TokenizedText& text) {
    FrequencyTable table;
    table.counts.assign(text.vocab ? text.vocab->size() : 0, 0);
    for (TokenId id : text.tokens) {
        if (id >= table.counts.size()) table.counts.resize(id + 1, 0);
        ++table.counts[id];
    }
    table.total = text.tokens.size();
    return table;
}

TokenizedText prefix(const TokenizedText& text, std::size_t n) {
    if (n > text.size()) {
        throw PreconditionError("prefix length " + std::to_string(n) +
                                " exceeds token count " + std::to_string(text.size()));
    }
    TokenizedText out;
    out.tokens.assign(text.tokens.begin(), text.tokens.begin() + static_cast<std::ptrdiff_t>(n));
    out.vocab = text.vocab;
    out.source_id = text.source_id;
    return out;
}

} // namespace wordent
