#include "lawkg/extract.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "lawkg/error.hpp"
#include "lawkg/text.hpp"

namespace lawkg::extract {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(CourtLevel l) {
    switch (l) {
        case CourtLevel::supreme: return "supreme";
        case CourtLevel::high: return "high";
        case CourtLevel::provincial: return "provincial";
        case CourtLevel::district: return "district";
        case CourtLevel::unknown: return "unknown";
    }
    return "unknown";
}

std::optional<CaseNumber> parse_case_number(std::string_view s) {
    static const std::regex pattern(R"(^(\d+)/(\d{4})/([A-Za-z]+(?:-[A-Za-z]+)?)$)");
    std::cmatch m;
    if (!std::regex_match(s.begin(), s.end(), m, pattern)) return std::nullopt;
    CaseNumber out;
    out.serial = std::stoi(m[1].str());
    out.year = std::stoi(m[2].str());
    out.code = m[3].str();
    return out;
}

CourtLevel derive_court_level(std::string_view court_name) {
    std::string folded = text::normalized_key(court_name);
    auto has = [&](std::string_view needle) { return folded.find(needle) != std::string::npos; };
    if (has("tối cao")) return CourtLevel::supreme;
    if (has("cấp cao")) return CourtLevel::high;
    if (has("huyện") || has("quận") || has("thị xã")) return CourtLevel::district;
    if (has("tỉnh") || has("thành phố")) return CourtLevel::provincial;
    // "TP Hà Nội" style abbreviations: look for a standalone tp token.
    for (const auto& tok : text::tokenize(court_name)) {
        if (tok == "tp") return CourtLevel::provincial;
    }
    return CourtLevel::unknown;
}

namespace {

std::vector<std::string> split_lines(std::string_view s) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t nl = s.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.emplace_back(s.substr(start));
            break;
        }
        lines.emplace_back(s.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

std::string value_after_colon(std::string_view line) {
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) return {};
    return text::collapse_whitespace(line.substr(colon + 1));
}

std::string find_case_number_in(const std::string& line) {
    static const std::regex pattern(R"((\d+/\d{4}/[A-Za-z]+(?:-[A-Za-z]+)?))");
    std::smatch m;
    if (std::regex_search(line, m, pattern)) return m[1].str();
    return {};
}

std::string find_iso_date_in(const std::string& line) {
    static const std::regex pattern(R"((\d{4}-\d{2}-\d{2}))");
    std::smatch m;
    if (std::regex_search(line, m, pattern)) return m[1].str();
    return {};
}

} // namespace

MetaFields extract_meta(const corpus::CaseRecord& rec) {
    bool meta_present = !rec.court_name.empty() || !rec.domain_name.empty() ||
                        !rec.case_number.empty() || !rec.date.empty();
    bool intro_present = !text::collapse_whitespace(rec.sections.introduction).empty();
    if (!meta_present && !intro_present) {
        throw Error("no metadata source for case '" + rec.case_id + "'");
    }

    MetaFields out;
    out.court_name = rec.court_name;
    out.domain_name = rec.domain_name;
    out.subdomain = rec.subdomain;
    out.case_number_raw = rec.case_number;
    out.date = rec.date;

    // Fill gaps from introduction header lines. Metadata always wins.
    if (intro_present) {
        for (const auto& raw_line : split_lines(rec.sections.introduction)) {
            std::string line = text::collapse_whitespace(raw_line);
            if (line.empty()) continue;
            std::string folded = text::normalized_key(line);
            if (out.court_name.empty() && folded.find("tòa án") != std::string::npos) {
                out.court_name = line;
            }
            if (out.domain_name.empty() && folded.rfind("về việc", 0) == 0) {
                out.domain_name = value_after_colon(line);
            }
            if (out.subdomain.empty() && folded.rfind("quan hệ tranh chấp", 0) == 0) {
                out.subdomain = value_after_colon(line);
            }
            if (out.case_number_raw.empty()) {
                out.case_number_raw = find_case_number_in(line);
            }
            if (out.date.empty()) {
                out.date = find_iso_date_in(line);
            }
        }
    }

    out.court_level = derive_court_level(out.court_name);
    out.case_number = parse_case_number(out.case_number_raw);
    return out;
}

namespace {

bool is_ascii_number(std::string_view tok) {
    if (tok.empty()) return false;
    for (char c : tok) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

bool is_clause_letter(const std::string& tok) {
    // "điểm a", "điểm b1": one letter, optionally trailed by digits.
    auto cps = text::decode_utf8(tok);
    if (cps.empty() || cps.size() > 2) return false;
    if (!text::is_word_codepoint(cps[0]) || (cps[0] >= '0' && cps[0] <= '9')) return false;
    if (cps.size() == 2 && !(cps[1] >= '0' && cps[1] <= '9')) return false;
    return true;
}

bool has_citation_cue(const std::vector<std::string>& tokens) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string& tok = tokens[i];
        if (tok == "luật") return true; // also covers "bộ luật"
        bool more = i + 1 < tokens.size();
        if ((tok == "điều" || tok == "khoản") && more && is_ascii_number(tokens[i + 1])) return true;
        if (tok == "điểm" && more && (is_ascii_number(tokens[i + 1]) || is_clause_letter(tokens[i + 1]))) return true;
    }
    return false;
}

} // namespace

std::vector<std::string> extract_citation_sentences(std::string_view text_in) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text_in.size(); ++i) {
        bool at_end = i == text_in.size();
        if (!at_end && text_in[i] != '.' && text_in[i] != ';' && text_in[i] != '\n') continue;
        std::string_view span = text_in.substr(start, i - start);
        start = i + 1;
        // Trim ASCII whitespace; the span itself stays verbatim.
        while (!span.empty() && std::isspace(static_cast<unsigned char>(span.front()))) span.remove_prefix(1);
        while (!span.empty() && std::isspace(static_cast<unsigned char>(span.back()))) span.remove_suffix(1);
        if (span.empty()) continue;
        if (has_citation_cue(text::tokenize(span))) out.emplace_back(span);
    }
    return out;
}

namespace {

std::vector<std::string> normalized_token_set(std::string_view s, const LawMatchConfig& cfg) {
    std::vector<std::string> tokens = text::tokenize(s);
    if (!cfg.lowercase) {
        // Re-tokenize preserving case: NFC + split only.
        tokens.clear();
        auto cps = text::decode_utf8(text::nfc(s));
        std::vector<char32_t> current;
        for (char32_t cp : cps) {
            if (text::is_word_codepoint(cp)) {
                current.push_back(cp);
            } else if (!current.empty()) {
                tokens.push_back(text::encode_utf8(current));
                current.clear();
            }
        }
        if (!current.empty()) tokens.push_back(text::encode_utf8(current));
    }
    if (cfg.strip_years) {
        std::erase_if(tokens, [](const std::string& t) { return text::is_year_token(t); });
    }
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    return tokens;
}

} // namespace

LawMatcher::LawMatcher(std::span<const corpus::LawEntry> laws, LawMatchConfig cfg) : cfg_(cfg) {
    if (laws.empty()) throw Error("law corpus is empty");
    if (cfg.score_threshold < 0 || cfg.score_threshold > 1) {
        throw Error("score_threshold must be in [0, 1]");
    }
    entries_.reserve(laws.size());
    for (const auto& law : laws) {
        std::string joined = law.law_name;
        for (const auto& alias : law.aliases) {
            joined += ' ';
            joined += alias;
        }
        entries_.push_back(Entry{law.law_id, law.year, normalized_token_set(joined, cfg_)});
    }
}

std::optional<LawMatch> LawMatcher::match(std::string_view sentence) const {
    std::vector<std::string> sent_tokens = normalized_token_set(sentence, cfg_);
    std::unordered_set<std::string_view> sent_set(sent_tokens.begin(), sent_tokens.end());

    const Entry* best = nullptr;
    std::size_t best_hits = 0;
    std::size_t best_size = 1;
    for (const auto& entry : entries_) {
        if (entry.tokens.empty()) continue;
        std::size_t hits = 0;
        for (const auto& tok : entry.tokens) {
            if (sent_set.count(tok)) ++hits;
        }
        if (hits == 0) continue;
        // Compare hits/size fractions exactly via cross-multiplication.
        std::size_t lhs = hits * best_size;
        std::size_t rhs = best_hits * entry.tokens.size();
        bool better = false;
        if (!best || lhs > rhs) {
            better = true;
        } else if (lhs == rhs) {
            if (cfg_.tie_break == TieBreak::latest_year) {
                int cur_year = entry.year.value_or(INT32_MIN);
                int best_year = best->year.value_or(INT32_MIN);
                if (cur_year != best_year) {
                    better = cur_year > best_year;
                } else {
                    better = entry.law_id < best->law_id;
                }
            } else {
                better = entry.law_id < best->law_id;
            }
        }
        if (better) {
            best = &entry;
            best_hits = hits;
            best_size = entry.tokens.size();
        }
    }
    if (!best) return std::nullopt;
    double score = static_cast<double>(best_hits) / static_cast<double>(best_size);
    if (score < cfg_.score_threshold) return std::nullopt;
    return LawMatch{best->law_id, score};
}

std::optional<LawMatch> match_law(std::string_view sentence, std::span<const corpus::LawEntry> laws,
                                  const LawMatchConfig& cfg) {
    return LawMatcher(laws, cfg).match(sentence);
}

ExtractionRecord extract_all(const corpus::CaseRecord& rec, const LawMatcher& matcher) {
    MetaFields meta = extract_meta(rec);
    ExtractionRecord out;
    out.case_id = rec.case_id;
    out.court_name = meta.court_name;
    out.court_level = meta.court_level;
    out.domain_name = meta.domain_name;
    out.subdomain = meta.subdomain;

    const std::string* sections[] = {&rec.sections.introduction, &rec.sections.content,
                                     &rec.sections.judgment, &rec.sections.decision};
    for (const std::string* section : sections) {
        for (auto& sentence : extract_citation_sentences(*section)) {
            auto matched = matcher.match(sentence);
            CitationSentence cs;
            cs.sentence = std::move(sentence);
            if (matched) {
                cs.law_id = matched->law_id;
                cs.score = matched->score;
                out.cited_laws.insert(matched->law_id);
            }
            out.citation_sentences.push_back(std::move(cs));
        }
    }
    return out;
}

ExtractionRecord extract_all(const corpus::CaseRecord& rec, std::span<const corpus::LawEntry> laws,
                             const LawMatchConfig& cfg) {
    return extract_all(rec, LawMatcher(laws, cfg));
}

namespace {

CourtLevel parse_court_level(const std::string& s, std::size_t line_no) {
    for (CourtLevel l : {CourtLevel::supreme, CourtLevel::high, CourtLevel::provincial,
                         CourtLevel::district, CourtLevel::unknown}) {
        if (s == to_string(l)) return l;
    }
    throw Error("line " + std::to_string(line_no) + ": unknown court_level '" + s + "'");
}

} // namespace

void save_records(const std::filesystem::path& path, std::span<const ExtractionRecord> records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    for (const auto& rec : records) {
        ordered_json obj;
        obj["case_id"] = rec.case_id;
        obj["court_name"] = rec.court_name;
        obj["court_level"] = to_string(rec.court_level);
        obj["domain_name"] = rec.domain_name;
        obj["subdomain"] = rec.subdomain;
        obj["cited_laws"] = rec.cited_laws;
        ordered_json sentences = ordered_json::array();
        for (const auto& cs : rec.citation_sentences) {
            ordered_json s;
            s["sentence"] = cs.sentence;
            if (cs.law_id) {
                s["law_id"] = *cs.law_id;
            } else {
                s["law_id"] = nullptr;
            }
            s["score"] = cs.score;
            sentences.push_back(std::move(s));
        }
        obj["citation_sentences"] = std::move(sentences);
        out << obj.dump() << '\n';
    }
    if (!out) throw Error("write failed for " + path.string());
}

std::vector<ExtractionRecord> load_records(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<ExtractionRecord> records;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) {
            throw Error("line " + std::to_string(line_no) + ": malformed JSON");
        }
        ExtractionRecord rec;
        try {
            rec.case_id = obj.at("case_id").get<std::string>();
            rec.court_name = obj.value("court_name", std::string{});
            rec.court_level = parse_court_level(obj.value("court_level", std::string{"unknown"}), line_no);
            rec.domain_name = obj.value("domain_name", std::string{});
            rec.subdomain = obj.value("subdomain", std::string{});
            for (const auto& l : obj.value("cited_laws", json::array())) {
                rec.cited_laws.insert(l.get<std::string>());
            }
            for (const auto& s : obj.value("citation_sentences", json::array())) {
                CitationSentence cs;
                cs.sentence = s.at("sentence").get<std::string>();
                if (s.contains("law_id") && !s["law_id"].is_null()) cs.law_id = s["law_id"].get<std::string>();
                cs.score = s.value("score", 0.0);
                rec.citation_sentences.push_back(std::move(cs));
            }
        } catch (const json::exception& e) {
            throw Error("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!seen.insert(rec.case_id).second) {
            throw Error("line " + std::to_string(line_no) + ": duplicate case_id '" + rec.case_id + "'");
        }
        records.push_back(std::move(rec));
    }
    return records;
}

} // namespace lawkg::extract
