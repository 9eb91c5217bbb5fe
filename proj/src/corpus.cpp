#include "lawkg/corpus.hpp"

#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "lawkg/error.hpp"
#include "lawkg/text.hpp"

namespace lawkg::corpus {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(DocumentType t) {
    return t == DocumentType::verdict ? "verdict" : "decision";
}

std::string_view to_string(CaseLevel l) {
    switch (l) {
        case CaseLevel::trial: return "trial";
        case CaseLevel::appellate: return "appellate";
        case CaseLevel::cassation_reopening: return "cassation_reopening";
    }
    return "trial";
}

SectionMarkerConfig SectionMarkerConfig::defaults() {
    return SectionMarkerConfig{
        {"NỘI DUNG VỤ ÁN"},
        {"NHẬN ĐỊNH CỦA TÒA ÁN", "XÉT THẤY"},
        {"QUYẾT ĐỊNH"},
    };
}

namespace {

std::string line_err(std::size_t line_no, const std::string& msg) {
    return "line " + std::to_string(line_no) + ": " + msg;
}

bool valid_case_number(std::string_view s) {
    // ^\d+/\d{4}/[A-Za-z]+(-[A-Za-z]+)?$
    std::size_t i = 0;
    auto digits = [&](std::size_t min_len, std::size_t max_len) {
        std::size_t start = i;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
        std::size_t n = i - start;
        return n >= min_len && (max_len == 0 || n <= max_len);
    };
    auto alpha = [&]() {
        std::size_t start = i;
        while (i < s.size() && ((s[i] >= 'A' && s[i] <= 'Z') || (s[i] >= 'a' && s[i] <= 'z'))) ++i;
        return i > start;
    };
    if (!digits(1, 0)) return false;
    if (i >= s.size() || s[i] != '/') return false;
    ++i;
    if (!digits(4, 4)) return false;
    if (i >= s.size() || s[i] != '/') return false;
    ++i;
    if (!alpha()) return false;
    if (i < s.size() && s[i] == '-') {
        ++i;
        if (!alpha()) return false;
    }
    return i == s.size();
}

bool valid_iso_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (s[i] < '0' || s[i] > '9') return false;
    }
    int month = (s[5] - '0') * 10 + (s[6] - '0');
    int day = (s[8] - '0') * 10 + (s[9] - '0');
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

std::string get_string(const json& obj, const char* key, std::size_t line_no, bool required) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        if (required) throw Error(line_err(line_no, std::string("missing ") + key));
        return {};
    }
    if (!it->is_string()) throw Error(line_err(line_no, std::string(key) + " must be a string"));
    return text::nfc(it->get<std::string>());
}

DocumentType parse_document_type(const std::string& s, std::size_t line_no) {
    if (s == "verdict") return DocumentType::verdict;
    if (s == "decision") return DocumentType::decision;
    throw Error(line_err(line_no, "unknown document_type '" + s + "'"));
}

CaseLevel parse_case_level(const std::string& s, std::size_t line_no) {
    if (s == "trial") return CaseLevel::trial;
    if (s == "appellate") return CaseLevel::appellate;
    if (s == "cassation_reopening") return CaseLevel::cassation_reopening;
    throw Error(line_err(line_no, "unknown case_level '" + s + "'"));
}

CaseRecord case_from_json(const json& obj, std::size_t line_no, const SectionMarkerConfig& markers) {
    if (!obj.is_object()) throw Error(line_err(line_no, "record must be a JSON object"));
    CaseRecord rec;
    rec.case_id = get_string(obj, "case_id", line_no, true);
    if (rec.case_id.empty()) throw Error(line_err(line_no, "missing case_id"));
    rec.case_number = get_string(obj, "case_number", line_no, false);
    if (!rec.case_number.empty() && !valid_case_number(rec.case_number)) {
        throw Error(line_err(line_no, "invalid case_number '" + rec.case_number + "'"));
    }
    rec.document_type = parse_document_type(get_string(obj, "document_type", line_no, true), line_no);
    rec.case_level = parse_case_level(get_string(obj, "case_level", line_no, true), line_no);
    rec.date = get_string(obj, "date", line_no, false);
    if (!rec.date.empty() && !valid_iso_date(rec.date)) {
        throw Error(line_err(line_no, "invalid date '" + rec.date + "' (expected YYYY-MM-DD)"));
    }
    rec.court_name = get_string(obj, "court_name", line_no, false);
    rec.domain_name = get_string(obj, "domain_name", line_no, false);
    rec.subdomain = get_string(obj, "subdomain", line_no, false);

    auto sec = obj.find("sections");
    if (sec != obj.end() && !sec->is_null()) {
        if (!sec->is_object()) throw Error(line_err(line_no, "sections must be an object"));
        rec.sections.introduction = get_string(*sec, "introduction", line_no, false);
        rec.sections.content = get_string(*sec, "content", line_no, false);
        rec.sections.judgment = get_string(*sec, "judgment", line_no, false);
        rec.sections.decision = get_string(*sec, "decision", line_no, false);
        if (auto raw = obj.find("raw_text"); raw != obj.end() && raw->is_string()) {
            rec.raw_text = text::nfc(raw->get<std::string>());
        }
    } else {
        std::string raw = get_string(obj, "raw_text", line_no, false);
        if (raw.empty()) throw Error(line_err(line_no, "record has neither sections nor raw_text"));
        rec.raw_text = raw;
        rec.sections = segment_sections(raw, markers);
    }
    if (rec.sections.introduction.empty() && rec.sections.content.empty() &&
        rec.sections.judgment.empty() && rec.sections.decision.empty()) {
        throw Error(line_err(line_no, "all section bodies are empty"));
    }
    return rec;
}

LawEntry law_from_json(const json& obj, std::size_t line_no) {
    if (!obj.is_object()) throw Error(line_err(line_no, "record must be a JSON object"));
    LawEntry law;
    law.law_id = get_string(obj, "law_id", line_no, true);
    if (law.law_id.empty()) throw Error(line_err(line_no, "missing law_id"));
    law.law_name = get_string(obj, "law_name", line_no, true);
    if (law.law_name.empty()) throw Error(line_err(line_no, "empty law_name"));
    if (auto it = obj.find("year"); it != obj.end() && !it->is_null()) {
        if (!it->is_number_integer()) throw Error(line_err(line_no, "year must be an integer"));
        int y = it->get<int>();
        if (y < 1900 || y > 2100) throw Error(line_err(line_no, "year " + std::to_string(y) + " out of range [1900, 2100]"));
        law.year = y;
    }
    if (auto it = obj.find("aliases"); it != obj.end() && !it->is_null()) {
        if (!it->is_array()) throw Error(line_err(line_no, "aliases must be an array"));
        for (const auto& a : *it) {
            if (!a.is_string()) throw Error(line_err(line_no, "aliases must contain strings"));
            law.aliases.push_back(text::nfc(a.get<std::string>()));
        }
    }
    return law;
}

GoldLabel gold_from_json(const json& obj, std::size_t line_no) {
    if (!obj.is_object()) throw Error(line_err(line_no, "record must be a JSON object"));
    GoldLabel label;
    label.case_id = get_string(obj, "case_id", line_no, true);
    if (label.case_id.empty()) throw Error(line_err(line_no, "missing case_id"));
    auto it = obj.find("gold_laws");
    if (it == obj.end() || !it->is_array()) throw Error(line_err(line_no, "missing gold_laws array"));
    for (const auto& l : *it) {
        if (!l.is_string()) throw Error(line_err(line_no, "gold_laws must contain strings"));
        label.gold_laws.insert(text::nfc(l.get<std::string>()));
    }
    return label;
}

/// Applies fn to each JSONL line; fn gets the parsed value and line number.
template <typename Fn>
void for_each_jsonl(const std::filesystem::path& path, Fn&& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded()) throw Error(line_err(line_no, "malformed JSON"));
        fn(obj, line_no);
    }
}

} // namespace

std::vector<CaseRecord> load_cases(const std::filesystem::path& path, const SectionMarkerConfig& markers) {
    std::vector<CaseRecord> cases;
    std::unordered_set<std::string> seen;
    for_each_jsonl(path, [&](const json& obj, std::size_t line_no) {
        CaseRecord rec = case_from_json(obj, line_no, markers);
        if (!seen.insert(rec.case_id).second) {
            throw Error(line_err(line_no, "duplicate case_id '" + rec.case_id + "'"));
        }
        cases.push_back(std::move(rec));
    });
    return cases;
}

std::vector<LawEntry> load_laws(const std::filesystem::path& path) {
    std::vector<LawEntry> laws;
    std::unordered_set<std::string> seen;
    for_each_jsonl(path, [&](const json& obj, std::size_t line_no) {
        LawEntry law = law_from_json(obj, line_no);
        if (!seen.insert(law.law_id).second) {
            throw Error(line_err(line_no, "duplicate law_id '" + law.law_id + "'"));
        }
        laws.push_back(std::move(law));
    });
    return laws;
}

std::vector<GoldLabel> load_gold(const std::filesystem::path& path) {
    std::vector<GoldLabel> gold;
    std::unordered_set<std::string> seen;
    for_each_jsonl(path, [&](const json& obj, std::size_t line_no) {
        GoldLabel label = gold_from_json(obj, line_no);
        if (!seen.insert(label.case_id).second) {
            throw Error(line_err(line_no, "duplicate case_id '" + label.case_id + "'"));
        }
        gold.push_back(std::move(label));
    });
    return gold;
}

std::vector<GoldLabel> load_gold(const std::filesystem::path& path, std::span<const LawEntry> laws) {
    std::unordered_set<std::string> known;
    for (const auto& law : laws) known.insert(law.law_id);
    auto gold = load_gold(path);
    for (const auto& label : gold) {
        for (const auto& id : label.gold_laws) {
            if (!known.count(id)) {
                throw Error("gold label for case '" + label.case_id + "' references unknown law_id '" + id + "'");
            }
        }
    }
    return gold;
}

ordered_json to_json(const CaseRecord& rec) {
    ordered_json obj;
    obj["case_id"] = rec.case_id;
    obj["case_number"] = rec.case_number;
    obj["document_type"] = to_string(rec.document_type);
    obj["case_level"] = to_string(rec.case_level);
    obj["date"] = rec.date;
    obj["court_name"] = rec.court_name;
    obj["domain_name"] = rec.domain_name;
    obj["subdomain"] = rec.subdomain;
    obj["sections"] = ordered_json{
        {"introduction", rec.sections.introduction},
        {"content", rec.sections.content},
        {"judgment", rec.sections.judgment},
        {"decision", rec.sections.decision},
    };
    return obj;
}

ordered_json to_json(const LawEntry& law) {
    ordered_json obj;
    obj["law_id"] = law.law_id;
    obj["law_name"] = law.law_name;
    if (law.year) {
        obj["year"] = *law.year;
    } else {
        obj["year"] = nullptr;
    }
    obj["aliases"] = law.aliases;
    return obj;
}

ordered_json to_json(const GoldLabel& label) {
    ordered_json obj;
    obj["case_id"] = label.case_id;
    obj["gold_laws"] = label.gold_laws;
    return obj;
}

namespace {

template <typename T>
void save_jsonl(const std::filesystem::path& path, std::span<const T> items) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    for (const auto& item : items) {
        out << to_json(item).dump() << '\n';
    }
    if (!out) throw Error("write failed for " + path.string());
}

} // namespace

void save_cases(const std::filesystem::path& path, std::span<const CaseRecord> cases) {
    save_jsonl(path, cases);
}

void save_laws(const std::filesystem::path& path, std::span<const LawEntry> laws) {
    save_jsonl(path, laws);
}

void save_gold(const std::filesystem::path& path, std::span<const GoldLabel> gold) {
    save_jsonl(path, gold);
}

namespace {

/// Case-insensitive substring search at codepoint level. Returns byte offset
/// of the match and the matched byte length, or npos.
std::pair<std::size_t, std::size_t> find_marker(std::string_view haystack, std::size_t from_byte,
                                                const std::vector<char32_t>& needle_folded) {
    if (needle_folded.empty()) return {std::string_view::npos, 0};
    std::vector<char32_t> hay = text::decode_utf8(haystack.substr(from_byte));
    // Byte offsets per codepoint, relative to from_byte.
    std::vector<std::size_t> offsets;
    offsets.reserve(hay.size() + 1);
    {
        std::string_view rest = haystack.substr(from_byte);
        std::size_t i = 0;
        while (i < rest.size()) {
            offsets.push_back(i);
            unsigned char c = static_cast<unsigned char>(rest[i]);
            std::size_t len = c < 0x80 ? 1 : (c & 0xE0) == 0xC0 ? 2 : (c & 0xF0) == 0xE0 ? 3 : (c & 0xF8) == 0xF0 ? 4 : 1;
            if (i + len > rest.size()) len = 1;
            i += len;
        }
        offsets.push_back(rest.size());
    }
    if (hay.size() < needle_folded.size()) return {std::string_view::npos, 0};
    for (char32_t& cp : hay) cp = text::lower_codepoint(cp);
    for (std::size_t i = 0; i + needle_folded.size() <= hay.size(); ++i) {
        bool match = true;
        for (std::size_t k = 0; k < needle_folded.size(); ++k) {
            if (hay[i + k] != needle_folded[k]) {
                match = false;
                break;
            }
        }
        if (match) {
            std::size_t start = from_byte + offsets[i];
            std::size_t end = from_byte + offsets[i + needle_folded.size()];
            return {start, end - start};
        }
    }
    return {std::string_view::npos, 0};
}

std::vector<std::vector<char32_t>> fold_markers(const std::vector<std::string>& markers) {
    std::vector<std::vector<char32_t>> out;
    for (const auto& m : markers) {
        auto cps = text::decode_utf8(text::nfc(m));
        for (char32_t& cp : cps) cp = text::lower_codepoint(cp);
        out.push_back(std::move(cps));
    }
    return out;
}

} // namespace

SectionSet segment_sections(std::string_view raw_text, const SectionMarkerConfig& markers) {
    const std::vector<std::vector<char32_t>> groups[3] = {
        fold_markers(markers.content),
        fold_markers(markers.judgment),
        fold_markers(markers.decision),
    };

    // Leftmost match (first listed pattern wins ties) per section, scanning
    // forward so markers are honored in document order only.
    std::size_t cursor = 0;
    std::size_t starts[3];
    bool matched[3] = {false, false, false};
    for (int sec = 0; sec < 3; ++sec) {
        std::size_t best_pos = std::string_view::npos;
        std::size_t best_len = 0;
        for (const auto& needle : groups[sec]) {
            auto [pos, len] = find_marker(raw_text, cursor, needle);
            if (pos < best_pos) {
                best_pos = pos;
                best_len = len;
            }
        }
        if (best_pos != std::string_view::npos) {
            starts[sec] = best_pos;
            matched[sec] = true;
            cursor = best_pos + best_len;
        }
    }

    std::size_t end = raw_text.size();
    std::size_t b3 = matched[2] ? starts[2] : end;
    std::size_t b2 = matched[1] ? starts[1] : b3;
    std::size_t b1 = matched[0] ? starts[0] : b2;

    SectionSet out;
    out.introduction = std::string(raw_text.substr(0, b1));
    out.content = std::string(raw_text.substr(b1, b2 - b1));
    out.judgment = std::string(raw_text.substr(b2, b3 - b2));
    out.decision = std::string(raw_text.substr(b3, end - b3));
    return out;
}

} // namespace lawkg::corpus
