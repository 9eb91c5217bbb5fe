#include "lawkg/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "lawkg/error.hpp"

namespace lawkg::bm25 {

using nlohmann::json;
using nlohmann::ordered_json;

void validate(const Bm25Params& params) {
    if (!(params.k1 >= 0)) throw Error("k1 must be >= 0");
    if (!(params.b >= 0 && params.b <= 1)) throw Error("b must be in [0, 1]");
}

Bm25Index Bm25Index::build(std::span<const std::pair<std::string, std::string>> docs) {
    std::vector<std::pair<std::string, std::vector<std::string>>> tokenized;
    tokenized.reserve(docs.size());
    for (const auto& [id, contents] : docs) {
        tokenized.emplace_back(id, tokenize(contents));
    }
    return build_pretokenized(tokenized);
}

Bm25Index Bm25Index::build_pretokenized(
    std::span<const std::pair<std::string, std::vector<std::string>>> docs) {
    Bm25Index index;
    index.doc_ids_.reserve(docs.size());
    index.doc_len_.reserve(docs.size());
    std::uint64_t total_len = 0;
    for (const auto& [id, tokens] : docs) {
        auto [it, inserted] = index.id_to_index_.emplace(id, static_cast<std::uint32_t>(index.doc_ids_.size()));
        if (!inserted) throw Error("duplicate doc id '" + id + "'");
        std::uint32_t doc_idx = it->second;
        index.doc_ids_.push_back(id);
        index.doc_len_.push_back(static_cast<std::uint32_t>(tokens.size()));
        total_len += tokens.size();

        std::map<std::string, std::uint32_t> freqs;
        for (const auto& tok : tokens) ++freqs[tok];
        for (const auto& [term, tf] : freqs) {
            index.postings_[term].emplace_back(doc_idx, tf);
        }
    }
    if (!docs.empty()) {
        index.avgdl_ = static_cast<double>(total_len) / static_cast<double>(docs.size());
    }
    return index;
}

bool Bm25Index::contains(std::string_view doc_id) const {
    return id_to_index_.find(std::string(doc_id)) != id_to_index_.end();
}

std::uint32_t Bm25Index::require_doc(const std::string& doc_id) const {
    auto it = id_to_index_.find(doc_id);
    if (it == id_to_index_.end()) throw Error("unknown doc id '" + doc_id + "'");
    return it->second;
}

std::size_t Bm25Index::doc_length(const std::string& doc_id) const {
    return doc_len_[require_doc(doc_id)];
}

std::size_t Bm25Index::doc_frequency(const std::string& term) const {
    auto it = postings_.find(term);
    return it == postings_.end() ? 0 : it->second.size();
}

std::size_t Bm25Index::term_frequency(const std::string& term, const std::string& doc_id) const {
    std::uint32_t doc_idx = require_doc(doc_id);
    auto it = postings_.find(term);
    if (it == postings_.end()) return 0;
    const auto& list = it->second;
    auto pos = std::lower_bound(list.begin(), list.end(), doc_idx,
                                [](const Posting& p, std::uint32_t idx) { return p.first < idx; });
    if (pos == list.end() || pos->first != doc_idx) return 0;
    return pos->second;
}

double Bm25Index::idf(const std::string& term) const {
    double n = static_cast<double>(doc_frequency(term));
    double num_docs = static_cast<double>(doc_count());
    return std::log(1.0 + (num_docs - n + 0.5) / (n + 0.5));
}

double Bm25Index::score(std::span<const std::string> query_tokens, const std::string& doc_id,
                        const Bm25Params& params) const {
    validate(params);
    std::uint32_t doc_idx = require_doc(doc_id);
    double norm = params.k1 * (1.0 - params.b);
    if (avgdl_ > 0) {
        norm += params.k1 * params.b * static_cast<double>(doc_len_[doc_idx]) / avgdl_;
    }
    double total = 0;
    for (const auto& term : query_tokens) {
        auto it = postings_.find(term);
        if (it == postings_.end()) continue;
        const auto& list = it->second;
        auto pos = std::lower_bound(list.begin(), list.end(), doc_idx,
                                    [](const Posting& p, std::uint32_t idx) { return p.first < idx; });
        if (pos == list.end() || pos->first != doc_idx) continue;
        double tf = static_cast<double>(pos->second);
        total += idf(term) * tf * (params.k1 + 1.0) / (tf + norm);
    }
    return total;
}

std::vector<ScoredDoc> Bm25Index::ranked(std::span<const std::string> query_tokens, std::size_t k,
                                         const Bm25Params& params,
                                         const std::function<bool(std::uint32_t)>& keep) const {
    validate(params);
    if (k == 0 || doc_count() == 0) return {};

    // Per-query term multiplicity: each occurrence contributes a full term.
    std::map<std::string, std::uint32_t> multiplicity;
    for (const auto& term : query_tokens) ++multiplicity[term];

    std::vector<double> scores(doc_count(), 0.0);
    std::vector<std::uint32_t> touched;
    for (const auto& [term, count] : multiplicity) {
        auto it = postings_.find(term);
        if (it == postings_.end()) continue;
        double weight = idf(term) * static_cast<double>(count);
        for (const auto& [doc_idx, tf_raw] : it->second) {
            double tf = static_cast<double>(tf_raw);
            double norm = params.k1 * (1.0 - params.b);
            if (avgdl_ > 0) {
                norm += params.k1 * params.b * static_cast<double>(doc_len_[doc_idx]) / avgdl_;
            }
            if (scores[doc_idx] == 0.0) touched.push_back(doc_idx);
            scores[doc_idx] += weight * tf * (params.k1 + 1.0) / (tf + norm);
        }
    }

    std::vector<std::uint32_t> hits;
    hits.reserve(touched.size());
    for (std::uint32_t doc_idx : touched) {
        if (scores[doc_idx] > 0 && (!keep || keep(doc_idx))) hits.push_back(doc_idx);
    }
    std::sort(hits.begin(), hits.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return doc_ids_[a] < doc_ids_[b];
    });
    if (hits.size() > k) hits.resize(k);

    std::vector<ScoredDoc> out;
    out.reserve(hits.size());
    for (std::uint32_t doc_idx : hits) {
        out.push_back(ScoredDoc{doc_ids_[doc_idx], scores[doc_idx]});
    }
    return out;
}

std::vector<ScoredDoc> Bm25Index::top_k(std::string_view query_text, std::size_t k,
                                        const Bm25Params& params) const {
    return top_k_tokens(tokenize(query_text), k, params);
}

std::vector<ScoredDoc> Bm25Index::top_k_tokens(std::span<const std::string> query_tokens,
                                               std::size_t k, const Bm25Params& params) const {
    return ranked(query_tokens, k, params, nullptr);
}

std::vector<ScoredDoc> Bm25Index::top_k_among(std::span<const std::string> query_tokens,
                                              const std::unordered_set<std::string>& allowed,
                                              std::size_t k, const Bm25Params& params) const {
    return ranked(query_tokens, k, params,
                  [&](std::uint32_t doc_idx) { return allowed.count(doc_ids_[doc_idx]) > 0; });
}

void Bm25Index::save(const std::filesystem::path& path) const {
    ordered_json obj;
    obj["format"] = "lawkg-bm25";
    obj["version"] = 1;
    ordered_json docs = ordered_json::array();
    for (std::size_t i = 0; i < doc_ids_.size(); ++i) {
        docs.push_back(ordered_json{{"id", doc_ids_[i]}, {"len", doc_len_[i]}});
    }
    obj["docs"] = std::move(docs);
    // Terms sorted for a stable file.
    std::vector<std::string> terms;
    terms.reserve(postings_.size());
    for (const auto& [term, _] : postings_) terms.push_back(term);
    std::sort(terms.begin(), terms.end());
    ordered_json post;
    for (const auto& term : terms) {
        ordered_json list = ordered_json::array();
        for (const auto& [doc_idx, tf] : postings_.at(term)) {
            list.push_back(ordered_json::array({doc_idx, tf}));
        }
        post[term] = std::move(list);
    }
    obj["postings"] = std::move(post);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << obj.dump() << '\n';
    if (!out) throw Error("write failed for " + path.string());
}

Bm25Index Bm25Index::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    json obj = json::parse(in, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) throw Error("malformed index file " + path.string());
    if (obj.value("format", std::string{}) != "lawkg-bm25" || obj.value("version", 0) != 1) {
        throw Error("unsupported index format in " + path.string());
    }
    Bm25Index index;
    std::uint64_t total_len = 0;
    for (const auto& doc : obj.at("docs")) {
        std::string id = doc.at("id").get<std::string>();
        std::uint32_t len = doc.at("len").get<std::uint32_t>();
        auto [it, inserted] = index.id_to_index_.emplace(id, static_cast<std::uint32_t>(index.doc_ids_.size()));
        if (!inserted) throw Error("duplicate doc id '" + id + "' in " + path.string());
        (void)it;
        index.doc_ids_.push_back(std::move(id));
        index.doc_len_.push_back(len);
        total_len += len;
    }
    if (!index.doc_ids_.empty()) {
        index.avgdl_ = static_cast<double>(total_len) / static_cast<double>(index.doc_ids_.size());
    }
    for (const auto& [term, list] : obj.at("postings").items()) {
        auto& entry = index.postings_[term];
        for (const auto& p : list) {
            std::uint32_t doc_idx = p.at(0).get<std::uint32_t>();
            if (doc_idx >= index.doc_ids_.size()) {
                throw Error("posting for '" + term + "' references unknown doc index");
            }
            entry.emplace_back(doc_idx, p.at(1).get<std::uint32_t>());
        }
    }
    return index;
}

} // namespace lawkg::bm25
