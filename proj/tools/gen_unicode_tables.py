#!/usr/bin/env python3
"""Regenerates src/unicode_tables.inc from the Python unicodedata database.

The toolkit only needs Unicode-correct handling for Latin text with combining
diacritics (Vietnamese uses precomposed letters up to U+1EFF), so the tables
are restricted to that range instead of shipping the full UCD.
"""

import sys
import unicodedata

LOWER_RANGES = [(0x00C0, 0x024F), (0x1E00, 0x1EFF)]
COMBINER_RANGE = (0x0300, 0x036F)
BASE_MAX = 0x2000


def lower_entries():
    out = []
    for lo, hi in LOWER_RANGES:
        for cp in range(lo, hi + 1):
            low = chr(cp).lower()
            if len(low) == 1 and ord(low) != cp:
                out.append((cp, ord(low)))
    return out


def compose_entries():
    out = []
    for cp in range(0x80, BASE_MAX):
        d = unicodedata.decomposition(chr(cp))
        if not d or d.startswith("<"):
            continue
        parts = d.split()
        if len(parts) != 2:
            continue
        base, comb = int(parts[0], 16), int(parts[1], 16)
        if not (COMBINER_RANGE[0] <= comb <= COMBINER_RANGE[1]):
            continue
        if base >= BASE_MAX:
            continue
        out.append((base, comb, cp))
    return out


def ccc_entries():
    out = []
    for cp in range(COMBINER_RANGE[0], COMBINER_RANGE[1] + 1):
        out.append((cp, unicodedata.combining(chr(cp))))
    return out


def main():
    lows = lower_entries()
    comps = compose_entries()
    cccs = ccc_entries()
    w = sys.stdout.write
    w("// Generated by tools/gen_unicode_tables.py -- do not edit by hand.\n")
    w("// Unicode %s data, Latin + combining-diacritics subset.\n\n" % unicodedata.unidata_version)
    w("struct LowerEntry { char32_t upper; char32_t lower; };\n")
    w("inline constexpr LowerEntry kLowerTable[] = {\n")
    for cp, low in lows:
        w("    {0x%04X, 0x%04X},\n" % (cp, low))
    w("};\n\n")
    w("struct ComposeEntry { char32_t base; char32_t combiner; char32_t composed; };\n")
    w("inline constexpr ComposeEntry kComposeTable[] = {\n")
    for base, comb, cp in sorted(comps):
        w("    {0x%04X, 0x%04X, 0x%04X},\n" % (base, comb, cp))
    w("};\n\n")
    w("inline constexpr unsigned char kCombiningClass[0x70] = {\n")
    for i in range(0, len(cccs), 8):
        row = cccs[i:i + 8]
        w("    " + ", ".join("%3d" % ccc for _, ccc in row) + ",\n")
    w("};\n")


if __name__ == "__main__":
    main()
