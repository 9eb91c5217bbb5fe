#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace lawkg::corpus {

enum class DocumentType { verdict, decision };
enum class CaseLevel { trial, appellate, cassation_reopening };

std::string_view to_string(DocumentType t);
std::string_view to_string(CaseLevel l);

/// The four body parts of a case document, in reading order. Section text
/// includes its own header line, so concatenating the four parts in order
/// reproduces the full body byte for byte.
struct SectionSet {
    std::string introduction;
    std::string content;
    std::string judgment;
    std::string decision;

    std::string joined() const { return introduction + content + judgment + decision; }
    bool operator==(const SectionSet&) const = default;
};

struct CaseRecord {
    std::string case_id;
    std::string case_number; // "<serial>/<year>/<code>", may be empty
    DocumentType document_type = DocumentType::verdict;
    CaseLevel case_level = CaseLevel::trial;
    std::string date; // ISO-8601 calendar date
    std::string court_name;
    std::string domain_name;
    std::string subdomain;
    SectionSet sections;
    std::optional<std::string> raw_text;

    bool operator==(const CaseRecord&) const = default;
};

struct LawEntry {
    std::string law_id;
    std::string law_name;
    std::optional<int> year;
    std::vector<std::string> aliases;

    bool operator==(const LawEntry&) const = default;
};

struct GoldLabel {
    std::string case_id;
    std::set<std::string> gold_laws;

    bool operator==(const GoldLabel&) const = default;
};

/// Header patterns that open the content / judgment / decision sections.
/// Matching is diacritic-preserving but case-insensitive; several alternate
/// spellings may be listed per section.
struct SectionMarkerConfig {
    std::vector<std::string> content;
    std::vector<std::string> judgment;
    std::vector<std::string> decision;

    static SectionMarkerConfig defaults();
};

// ---------------------------------------------------------------------------
// JSONL ingestion. One record per line, UTF-8; every string field is NFC
// normalized on the way in. Malformed lines raise Error tagged with the
// 1-based line number.

std::vector<CaseRecord> load_cases(const std::filesystem::path& path,
                                   const SectionMarkerConfig& markers = SectionMarkerConfig::defaults());
std::vector<LawEntry> load_laws(const std::filesystem::path& path);
std::vector<GoldLabel> load_gold(const std::filesystem::path& path);

/// load_gold plus referential check: every gold law_id must exist in laws.
std::vector<GoldLabel> load_gold(const std::filesystem::path& path, std::span<const LawEntry> laws);

void save_cases(const std::filesystem::path& path, std::span<const CaseRecord> cases);
void save_laws(const std::filesystem::path& path, std::span<const LawEntry> laws);
void save_gold(const std::filesystem::path& path, std::span<const GoldLabel> gold);

nlohmann::ordered_json to_json(const CaseRecord& rec);
nlohmann::ordered_json to_json(const LawEntry& law);
nlohmann::ordered_json to_json(const GoldLabel& label);

/// Split a case body into the four sections. Text before the first matched
/// marker is the introduction; each matched marker starts its section (the
/// marker text stays in the section). Markers are matched in document order;
/// an unmatched marker yields an empty section and its text stays with the
/// preceding one. Degenerate input puts everything in the introduction.
SectionSet segment_sections(std::string_view raw_text, const SectionMarkerConfig& markers);

// ---------------------------------------------------------------------------
// Synthetic corpus generation. Replaces the upstream web crawl with a pure
// function of (seed, params) so the whole pipeline is testable offline.

struct GeneratorParams {
    int cases = 100;
    int laws = 225;
    int courts = 20;
    int domains = 12;
    /// Mean number of distinct laws cited per case. Counts are sampled as
    /// floor(m) + Bernoulli(frac(m)), so the expectation is exact.
    double mean_citations = 3.96;
    /// In [0,1]. Probability that a citation sentence's law name is
    /// misspelled badly enough that entity linking misses it.
    double noise = 0.0;
    /// Cases are generated in families that share a scenario template and
    /// gold law set; siblings are near-paraphrases of each other.
    int family_size = 4;
};

struct SyntheticCorpus {
    std::vector<CaseRecord> cases;
    std::vector<LawEntry> laws;
    std::vector<GoldLabel> gold;
};

SyntheticCorpus generate_corpus(std::uint64_t seed, const GeneratorParams& params);

} // namespace lawkg::corpus
