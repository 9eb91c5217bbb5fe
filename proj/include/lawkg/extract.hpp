#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lawkg/corpus.hpp"

namespace lawkg::extract {

enum class CourtLevel { supreme, high, provincial, district, unknown };

std::string_view to_string(CourtLevel l);

/// Parsed "<serial>/<year>/<code>" case number, e.g. 577/2022/HC-PT.
struct CaseNumber {
    int serial = 0;
    int year = 0;
    std::string code;

    bool operator==(const CaseNumber&) const = default;
};

std::optional<CaseNumber> parse_case_number(std::string_view s);

/// Metadata recovered from a case: structured fields win, missing ones are
/// filled from header patterns in the introduction section.
struct MetaFields {
    std::string court_name;
    CourtLevel court_level = CourtLevel::unknown;
    std::string domain_name;
    std::string subdomain;
    std::string case_number_raw;
    std::optional<CaseNumber> case_number;
    std::string date;
};

/// Court level from name keywords (tối cao / cấp cao / tỉnh / huyện ...).
/// Unknown stays unknown; never guessed.
CourtLevel derive_court_level(std::string_view court_name);

MetaFields extract_meta(const corpus::CaseRecord& rec);

/// Sentence-like spans (split on '.', ';' and newlines) that contain a law
/// citation cue: the token "luật", or "điều"/"khoản" followed by a number,
/// or "điểm" followed by a clause letter or number. Order of appearance is
/// kept and duplicates are retained.
std::vector<std::string> extract_citation_sentences(std::string_view text);

enum class TieBreak { latest_year, lexicographic };

struct LawMatchConfig {
    /// Minimum token-containment score for a match, in [0,1].
    double score_threshold = 0.6;
    bool lowercase = true;
    bool strip_years = true;
    TieBreak tie_break = TieBreak::latest_year;
};

struct LawMatch {
    std::string law_id;
    double score = 0;
};

/// Links citation sentences to law entries by token-set containment:
/// score = |T(sentence) ∩ T(law)| / |T(law)| where T is the normalized token
/// set of the law name plus aliases (year tokens stripped per config).
/// Precomputes law token sets once; reuse one matcher across a corpus.
class LawMatcher {
public:
    LawMatcher(std::span<const corpus::LawEntry> laws, LawMatchConfig cfg);

    /// Best law with score >= threshold, or nullopt. Ties break per config
    /// (latest year first or law_id order), then by ascending law_id.
    std::optional<LawMatch> match(std::string_view sentence) const;

    const LawMatchConfig& config() const { return cfg_; }

private:
    struct Entry {
        std::string law_id;
        std::optional<int> year;
        std::vector<std::string> tokens; // sorted unique
    };
    LawMatchConfig cfg_;
    std::vector<Entry> entries_;
};

std::optional<LawMatch> match_law(std::string_view sentence, std::span<const corpus::LawEntry> laws,
                                  const LawMatchConfig& cfg);

struct CitationSentence {
    std::string sentence;
    std::optional<std::string> law_id;
    double score = 0;

    bool operator==(const CitationSentence&) const = default;
};

struct ExtractionRecord {
    std::string case_id;
    std::string court_name;
    CourtLevel court_level = CourtLevel::unknown;
    std::string domain_name;
    std::string subdomain;
    std::set<std::string> cited_laws;
    std::vector<CitationSentence> citation_sentences;
};

/// Full per-case extraction: metadata fields plus the union of matched law
/// citations over all four sections (introduction, content, judgment,
/// decision, in that order).
ExtractionRecord extract_all(const corpus::CaseRecord& rec, const LawMatcher& matcher);
ExtractionRecord extract_all(const corpus::CaseRecord& rec, std::span<const corpus::LawEntry> laws,
                             const LawMatchConfig& cfg);

void save_records(const std::filesystem::path& path, std::span<const ExtractionRecord> records);
std::vector<ExtractionRecord> load_records(const std::filesystem::path& path);

} // namespace lawkg::extract
