#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace wordent::uni {

// True for Unicode general categories L* and N*.
bool is_word_char(char32_t c);

// True for combining marks (categories Mn, Mc, Me).
bool is_mark(char32_t c);

// Per-character simple lowercase mapping (no full/locale folding).
char32_t to_lower_simple(char32_t c);

// Validates `s` as UTF-8 and invokes fn(codepoint, byte_offset) for each
// scalar value. Throws IngestError at the first malformed sequence.
void for_each_codepoint(std::string_view s,
                        const std::function<void(char32_t, std::size_t)>& fn);

// Throws IngestError if `s` is not valid UTF-8.
void validate_utf8(std::string_view s);

// Canonical composition (NFC) of valid UTF-8.
std::string nfc(std::string_view s);

void append_utf8(std::string& out, char32_t c);

} // namespace wordent::uni
