#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lawkg::text {

// UTF-8 text utilities shared across the toolkit. Coverage is deliberately
// the Latin script plus combining diacritics (U+0300..U+036F), which is all
// the Vietnamese alphabet needs; other scripts pass through untouched.

/// Decode UTF-8 into codepoints. Invalid bytes decode as U+FFFD.
std::vector<char32_t> decode_utf8(std::string_view s);

/// Encode codepoints back to UTF-8.
std::string encode_utf8(const std::vector<char32_t>& cps);

/// Canonical composition (NFC) over the Latin + combining-diacritics subset:
/// combining marks are put in canonical order and composed with their base
/// letter, so "a" + U+0323 + U+0302 becomes U+1EAD (ậ).
std::string nfc(std::string_view s);

/// Lowercase ASCII and Latin letters with diacritics ("Đ" -> "đ", "Ề" -> "ề").
std::string casefold(std::string_view s);

char32_t lower_codepoint(char32_t cp);

/// True for codepoints tokenization keeps: ASCII alphanumerics and Latin
/// letters (U+00C0..U+024F except multiplication/division signs, and
/// U+1E00..U+1EFF). Everything else is a token separator.
bool is_word_codepoint(char32_t cp);

/// NFC + casefold + split on non-word codepoints, dropping empties.
/// Diacritics are preserved; Vietnamese syllables come out as one token each.
std::vector<std::string> tokenize(std::string_view s);

/// Four ASCII digits parsing to a value in [1900, 2100].
bool is_year_token(std::string_view token);

/// Trim and collapse runs of whitespace to single spaces.
std::string collapse_whitespace(std::string_view s);

/// NFC + casefold + whitespace collapse; the identity key used for
/// deduplicating court and domain names.
std::string normalized_key(std::string_view s);

/// FNV-1a, used for stable content-derived node ids.
std::uint64_t fnv1a(std::string_view s);

} // namespace lawkg::text
