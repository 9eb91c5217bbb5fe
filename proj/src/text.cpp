#include "lawkg/text.hpp"

#include <algorithm>
#include <cctype>

namespace lawkg::text {

namespace {

#include "unicode_tables.inc"

constexpr char32_t kReplacement = 0xFFFD;

unsigned char combining_class(char32_t cp) {
    if (cp >= 0x0300 && cp <= 0x036F) return kCombiningClass[cp - 0x0300];
    return 0;
}

char32_t compose_pair(char32_t base, char32_t comb) {
    for (const auto& e : kComposeTable) {
        if (e.base == base && e.combiner == comb) return e.composed;
    }
    return 0;
}

} // namespace

std::vector<char32_t> decode_utf8(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        char32_t cp = 0;
        std::size_t len = 0;
        if (c < 0x80) {
            cp = c;
            len = 1;
        } else if ((c & 0xE0) == 0xC0) {
            cp = c & 0x1F;
            len = 2;
        } else if ((c & 0xF0) == 0xE0) {
            cp = c & 0x0F;
            len = 3;
        } else if ((c & 0xF8) == 0xF0) {
            cp = c & 0x07;
            len = 4;
        } else {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        if (i + len > s.size()) {
            out.push_back(kReplacement);
            break;
        }
        bool ok = true;
        for (std::size_t k = 1; k < len; ++k) {
            unsigned char cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (cc & 0x3F);
        }
        if (!ok) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string encode_utf8(const std::vector<char32_t>& cps) {
    std::string out;
    out.reserve(cps.size() * 2);
    for (char32_t cp : cps) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

std::string nfc(std::string_view s) {
    std::vector<char32_t> cps = decode_utf8(s);

    // Canonical reordering: stable-sort each run of nonzero-ccc marks.
    std::size_t i = 0;
    while (i < cps.size()) {
        if (combining_class(cps[i]) == 0) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < cps.size() && combining_class(cps[j]) != 0) ++j;
        std::stable_sort(cps.begin() + static_cast<std::ptrdiff_t>(i),
                         cps.begin() + static_cast<std::ptrdiff_t>(j),
                         [](char32_t a, char32_t b) { return combining_class(a) < combining_class(b); });
        i = j;
    }

    // Composition pass: combine marks with the last starter when the pair is
    // canonical and no mark of the same or higher class blocks it.
    std::vector<char32_t> out;
    out.reserve(cps.size());
    std::ptrdiff_t starter = -1;
    int last_ccc = 0;
    for (char32_t cp : cps) {
        int ccc = combining_class(cp);
        if (ccc != 0 && starter >= 0 && (last_ccc == 0 || last_ccc < ccc)) {
            if (char32_t composed = compose_pair(out[static_cast<std::size_t>(starter)], cp)) {
                out[static_cast<std::size_t>(starter)] = composed;
                continue;
            }
        }
        out.push_back(cp);
        if (ccc == 0) {
            starter = static_cast<std::ptrdiff_t>(out.size()) - 1;
            last_ccc = 0;
        } else {
            last_ccc = ccc;
        }
    }
    return encode_utf8(out);
}

char32_t lower_codepoint(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp < 0x80) return cp;
    for (const auto& e : kLowerTable) {
        if (e.upper == cp) return e.lower;
    }
    return cp;
}

std::string casefold(std::string_view s) {
    std::vector<char32_t> cps = decode_utf8(s);
    for (char32_t& cp : cps) cp = lower_codepoint(cp);
    return encode_utf8(cps);
}

bool is_word_codepoint(char32_t cp) {
    if ((cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return true;
    if (cp >= 0x00C0 && cp <= 0x024F) return cp != 0x00D7 && cp != 0x00F7;
    return cp >= 0x1E00 && cp <= 0x1EFF;
}

std::vector<std::string> tokenize(std::string_view s) {
    std::vector<char32_t> cps = decode_utf8(nfc(s));
    std::vector<std::string> tokens;
    std::vector<char32_t> current;
    for (char32_t cp : cps) {
        cp = lower_codepoint(cp);
        if (is_word_codepoint(cp)) {
            current.push_back(cp);
        } else if (!current.empty()) {
            tokens.push_back(encode_utf8(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(encode_utf8(current));
    return tokens;
}

bool is_year_token(std::string_view token) {
    if (token.size() != 4) return false;
    int v = 0;
    for (char c : token) {
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    return v >= 1900 && v <= 2100;
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool in_space = true; // also trims leading whitespace
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_space = true;
        } else {
            if (in_space && !out.empty()) out.push_back(' ');
            out.push_back(c);
            in_space = false;
        }
    }
    return out;
}

std::string normalized_key(std::string_view s) {
    return collapse_whitespace(casefold(nfc(s)));
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace lawkg::text
