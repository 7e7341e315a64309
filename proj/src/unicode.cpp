#include "wordent/unicode.hpp"

#include "wordent/errors.hpp"

#include <unicode/bytestream.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/utf8.h>

namespace wordent::uni {

bool is_word_char(char32_t c) {
    return (U_GET_GC_MASK(static_cast<UChar32>(c)) & (U_GC_L_MASK | U_GC_N_MASK)) != 0;
}

bool is_mark(char32_t c) {
    return (U_GET_GC_MASK(static_cast<UChar32>(c)) & U_GC_M_MASK) != 0;
}

char32_t to_lower_simple(char32_t c) {
    return static_cast<char32_t>(u_tolower(static_cast<UChar32>(c)));
}

void for_each_codepoint(std::string_view s,
                        const std::function<void(char32_t, std::size_t)>& fn) {
    const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
    int32_t len = static_cast<int32_t>(s.size());
    int32_t i = 0;
    while (i < len) {
        int32_t start = i;
        UChar32 c;
        U8_NEXT(bytes, i, len, c);
        if (c < 0) {
            throw IngestError("invalid UTF-8 sequence at byte offset " +
                                  std::to_string(start),
                              static_cast<std::size_t>(start));
        }
        fn(static_cast<char32_t>(c), static_cast<std::size_t>(start));
    }
}

void validate_utf8(std::string_view s) {
    for_each_codepoint(s, [](char32_t, std::size_t) {});
}

std::string nfc(std::string_view s) {
    UErrorCode ec = U_ZERO_ERROR;
    const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(ec);
    if (U_FAILURE(ec) || norm == nullptr) {
        throw NumericError("NFC normalizer unavailable", 0.0);
    }
    std::string out;
    icu::StringByteSink<std::string> sink(&out);
    norm->normalizeUTF8(0, icu::StringPiece(s.data(), static_cast<int32_t>(s.size())),
                        sink, nullptr, ec);
    if (U_FAILURE(ec)) {
        throw NumericError("NFC normalization failed", 0.0);
    }
    return out;
}

void append_utf8(std::string& out, char32_t c) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool err = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), err);
    if (!err) out.append(reinterpret_cast<char*>(buf), static_cast<std::size_t>(n));
}

} // namespace wordent::uni
