#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "lawkg/text.hpp"

namespace lawkg::bm25 {

/// Free parameters of the Okapi ranking function.
struct Bm25Params {
    double k1 = 1.5;
    double b = 0.75;
};

struct ScoredDoc {
    std::string doc_id;
    double score = 0;

    bool operator==(const ScoredDoc&) const = default;
};

/// NFC + casefold + split on non-word codepoints. Vietnamese diacritics are
/// preserved; no stemming, no stop words.
inline std::vector<std::string> tokenize(std::string_view s) { return text::tokenize(s); }

/// Inverted index with exact term/document frequencies.
///
/// score(D, Q) = sum over query occurrences q of
///     IDF(q) * f(q,D)*(k1+1) / (f(q,D) + k1*(1 - b + b*|D|/avgdl))
/// with IDF(q) = ln(1 + (N - n_q + 0.5) / (n_q + 0.5)), which is
/// non-negative for every document frequency n_q.
///
/// Repeated query tokens contribute once per occurrence. The index is
/// immutable after build and safe to score from many threads.
class Bm25Index {
public:
    Bm25Index() = default;

    /// Tokenizes and indexes (doc id, text) pairs. Duplicate ids error.
    static Bm25Index build(std::span<const std::pair<std::string, std::string>> docs);
    static Bm25Index build_pretokenized(
        std::span<const std::pair<std::string, std::vector<std::string>>> docs);

    std::size_t doc_count() const { return doc_ids_.size(); }
    double avgdl() const { return avgdl_; }
    const std::vector<std::string>& doc_ids() const { return doc_ids_; }
    bool contains(std::string_view doc_id) const;

    std::size_t doc_length(const std::string& doc_id) const;
    std::size_t doc_frequency(const std::string& term) const;
    std::size_t term_frequency(const std::string& term, const std::string& doc_id) const;
    double idf(const std::string& term) const;

    double score(std::span<const std::string> query_tokens, const std::string& doc_id,
                 const Bm25Params& params) const;

    /// Documents with score > 0, sorted by score descending then doc id
    /// ascending, truncated to k.
    std::vector<ScoredDoc> top_k(std::string_view query_text, std::size_t k,
                                 const Bm25Params& params) const;
    std::vector<ScoredDoc> top_k_tokens(std::span<const std::string> query_tokens, std::size_t k,
                                        const Bm25Params& params) const;

    /// Same ranking restricted to an allowed id set (scores are unchanged;
    /// the index-wide statistics still apply).
    std::vector<ScoredDoc> top_k_among(std::span<const std::string> query_tokens,
                                       const std::unordered_set<std::string>& allowed, std::size_t k,
                                       const Bm25Params& params) const;

    /// JSON persistence with a version tag. Internal format, not a
    /// compatibility surface.
    void save(const std::filesystem::path& path) const;
    static Bm25Index load(const std::filesystem::path& path);

    bool operator==(const Bm25Index&) const = default;

private:
    using Posting = std::pair<std::uint32_t, std::uint32_t>; // doc index, term frequency

    std::uint32_t require_doc(const std::string& doc_id) const;
    std::vector<ScoredDoc> ranked(std::span<const std::string> query_tokens, std::size_t k,
                                  const Bm25Params& params,
                                  const std::function<bool(std::uint32_t)>& keep) const;

    std::vector<std::string> doc_ids_;
    std::unordered_map<std::string, std::uint32_t> id_to_index_;
    std::vector<std::uint32_t> doc_len_;
    double avgdl_ = 0;
    std::unordered_map<std::string, std::vector<Posting>> postings_; // sorted by doc index
};

void validate(const Bm25Params& params);

} // namespace lawkg::bm25
