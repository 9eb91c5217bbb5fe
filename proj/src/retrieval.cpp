#include "lawkg/retrieval.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "lawkg/error.hpp"
#include "lawkg/text.hpp"
#include "rng.hpp"

namespace lawkg::retrieval {

using boost::multiprecision::cpp_rational;
using nlohmann::ordered_json;

std::string_view to_string(QuerySection s) {
    switch (s) {
        case QuerySection::content: return "content";
        case QuerySection::judgment: return "judgment";
        case QuerySection::decision: return "decision";
    }
    return "content";
}

std::string_view to_string(AggMode m) {
    return m == AggMode::Union ? "union" : "intersection";
}

std::optional<QuerySection> parse_query_section(std::string_view s) {
    if (s == "content") return QuerySection::content;
    if (s == "judgment") return QuerySection::judgment;
    if (s == "decision") return QuerySection::decision;
    return std::nullopt;
}

std::optional<AggMode> parse_agg_mode(std::string_view s) {
    if (s == "union") return AggMode::Union;
    if (s == "intersection") return AggMode::Intersection;
    return std::nullopt;
}

std::set<std::string> aggregate(const std::vector<std::set<std::string>>& sets, AggMode mode) {
    if (sets.empty()) throw Error("aggregate requires at least one set");
    std::set<std::string> acc = sets.front();
    for (std::size_t i = 1; i < sets.size(); ++i) {
        if (mode == AggMode::Union) {
            acc.insert(sets[i].begin(), sets[i].end());
        } else {
            std::set<std::string> kept;
            for (const auto& x : acc) {
                if (sets[i].count(x)) kept.insert(x);
            }
            acc = std::move(kept);
        }
    }
    return acc;
}

const std::vector<RunSpec>& standard_runs() {
    static const std::vector<RunSpec> runs = [] {
        std::vector<RunSpec> r;
        r.push_back({1, 1, "Content of the case", QuerySection::content, 0, std::nullopt});
        r.push_back({2, 1, "Court's judgment", QuerySection::judgment, 0, std::nullopt});
        r.push_back({3, 1, "Court's decision", QuerySection::decision, 0, std::nullopt});
        r.push_back({4, 2, "Mix 3 queries (Union)", std::nullopt, 0, AggMode::Union});
        r.push_back({5, 2, "Mix 3 queries (Intersection)", std::nullopt, 0, AggMode::Intersection});
        r.push_back({6, 3, "Top-1 similar case", std::nullopt, 1, std::nullopt});
        r.push_back({7, 3, "Top-2 similar cases (Union)", std::nullopt, 2, AggMode::Union});
        r.push_back({8, 3, "Top-2 similar cases (Intersection)", std::nullopt, 2, AggMode::Intersection});
        r.push_back({9, 4, "Top-1 similar case", std::nullopt, 1, std::nullopt});
        r.push_back({10, 4, "Top-2 similar cases (Union)", std::nullopt, 2, AggMode::Union});
        r.push_back({11, 4, "Top-2 similar cases (Intersection)", std::nullopt, 2, AggMode::Intersection});
        return r;
    }();
    return runs;
}

std::string_view method_name(int method) {
    switch (method) {
        case 1: return "Case-law matching";
        case 2: return "Improved case-law matching";
        case 3: return "Case-case matching and KG";
        case 4: return "Domain case-case matching and KG";
    }
    return "";
}

bm25::Bm25Index build_law_index(std::span<const corpus::LawEntry> laws) {
    std::vector<std::pair<std::string, std::string>> docs;
    docs.reserve(laws.size());
    for (const auto& law : laws) {
        std::string body = law.law_name;
        for (const auto& alias : law.aliases) {
            body += '\n';
            body += alias;
        }
        docs.emplace_back(law.law_id, std::move(body));
    }
    return bm25::Bm25Index::build(docs);
}

std::string case_query_text(const corpus::CaseRecord& rec, std::optional<QuerySection> section) {
    if (!section) return rec.sections.joined();
    switch (*section) {
        case QuerySection::content: return rec.sections.content;
        case QuerySection::judgment: return rec.sections.judgment;
        case QuerySection::decision: return rec.sections.decision;
    }
    return rec.sections.joined();
}

bm25::Bm25Index build_case_index(std::span<const corpus::CaseRecord> cases,
                                 std::optional<QuerySection> section) {
    std::vector<std::pair<std::string, std::string>> docs;
    docs.reserve(cases.size());
    for (const auto& rec : cases) {
        docs.emplace_back(rec.case_id, case_query_text(rec, section));
    }
    return bm25::Bm25Index::build(docs);
}

std::set<std::string> method1_case_law(const corpus::CaseRecord& rec, QuerySection section,
                                       const bm25::Bm25Index& law_index, const bm25::Bm25Params& params) {
    auto top = law_index.top_k(case_query_text(rec, section), 1, params);
    std::set<std::string> out;
    if (!top.empty()) out.insert(top.front().doc_id);
    return out;
}

std::set<std::string> method2_mixed(const corpus::CaseRecord& rec, const bm25::Bm25Index& law_index,
                                    AggMode mode, const bm25::Bm25Params& params) {
    std::vector<std::set<std::string>> sets;
    for (QuerySection s : {QuerySection::content, QuerySection::judgment, QuerySection::decision}) {
        sets.push_back(method1_case_law(rec, s, law_index, params));
    }
    return aggregate(sets, mode);
}

namespace {

std::set<std::string> case_laws_from_graph(const kgraph::HeteroGraph& g, const std::string& case_id) {
    if (!g.has_node(case_id)) {
        throw Error("case index doc '" + case_id + "' is not a node of the graph");
    }
    if (g.node_type(case_id) != kgraph::NodeType::Case) {
        throw Error("graph node '" + case_id + "' is not a Case node");
    }
    auto laws = g.out_neighbors(case_id, kgraph::RelationType::BasedOn);
    return {laws.begin(), laws.end()};
}

std::set<std::string> laws_of_candidates(const std::vector<bm25::ScoredDoc>& candidates,
                                         const kgraph::HeteroGraph& g, int k,
                                         std::optional<AggMode> mode) {
    if (candidates.empty()) return {};
    std::vector<std::set<std::string>> sets;
    sets.reserve(candidates.size());
    for (const auto& cand : candidates) {
        sets.push_back(case_laws_from_graph(g, cand.doc_id));
    }
    if (sets.size() == 1) return sets.front();
    if (!mode) {
        throw Error("aggregation mode required for k=" + std::to_string(k) + " with " +
                    std::to_string(sets.size()) + " candidates");
    }
    return aggregate(sets, *mode);
}

} // namespace

std::set<std::string> method3_case_case(const corpus::CaseRecord& query,
                                        const bm25::Bm25Index& case_index, const kgraph::HeteroGraph& g,
                                        int k, std::optional<AggMode> mode, const bm25::Bm25Params& params,
                                        std::optional<QuerySection> query_section) {
    if (k < 1) throw Error("k must be >= 1");
    auto tokens = bm25::tokenize(case_query_text(query, query_section));
    auto candidates = case_index.top_k_tokens(tokens, static_cast<std::size_t>(k), params);
    return laws_of_candidates(candidates, g, k, mode);
}

std::set<std::string> method4_domain_case_case(const corpus::CaseRecord& query,
                                               const bm25::Bm25Index& case_index,
                                               const kgraph::HeteroGraph& g, int k,
                                               std::optional<AggMode> mode, const bm25::Bm25Params& params,
                                               std::optional<QuerySection> query_section) {
    if (k < 1) throw Error("k must be >= 1");
    extract::MetaFields meta = extract::extract_meta(query);
    if (meta.domain_name.empty()) {
        throw Error("query case '" + query.case_id + "' has no domain");
    }
    std::string domain_id = kgraph::domain_node_id(meta.domain_name);
    if (!g.has_node(domain_id)) {
        throw Error("unknown domain '" + meta.domain_name + "'");
    }
    auto domain_cases = g.in_neighbors(domain_id, kgraph::RelationType::BelongTo);
    std::unordered_set<std::string> allowed(domain_cases.begin(), domain_cases.end());
    if (allowed.empty()) return {};

    auto tokens = bm25::tokenize(case_query_text(query, query_section));
    auto candidates = case_index.top_k_among(tokens, allowed, static_cast<std::size_t>(k), params);
    return laws_of_candidates(candidates, g, k, mode);
}

Metrics evaluate(std::span<const QueryPrediction> predictions, std::span<const corpus::GoldLabel> gold) {
    std::unordered_map<std::string_view, const std::set<std::string>*> gold_by_case;
    for (const auto& label : gold) gold_by_case[label.case_id] = &label.gold_laws;

    cpp_rational sum_p = 0, sum_r = 0, sum_f1 = 0;
    for (const auto& pred : predictions) {
        auto it = gold_by_case.find(pred.case_id);
        if (it == gold_by_case.end()) {
            throw Error("no gold label for case '" + pred.case_id + "'");
        }
        const std::set<std::string>& truth = *it->second;
        if (truth.empty()) {
            throw Error("empty gold set for case '" + pred.case_id + "'");
        }
        std::size_t inter = 0;
        for (const auto& law : pred.predicted_laws) {
            if (truth.count(law)) ++inter;
        }
        cpp_rational p = pred.predicted_laws.empty()
                             ? cpp_rational(0)
                             : cpp_rational(inter, pred.predicted_laws.size());
        cpp_rational r(inter, truth.size());
        cpp_rational f1 = (p + r == 0) ? cpp_rational(0) : cpp_rational(2 * p * r / (p + r));
        sum_p += p;
        sum_r += r;
        sum_f1 += f1;
    }
    Metrics out;
    if (!predictions.empty()) {
        cpp_rational n(predictions.size());
        out.precision = static_cast<double>(sum_p / n);
        out.recall = static_cast<double>(sum_r / n);
        out.f1 = static_cast<double>(sum_f1 / n);
    }
    return out;
}

std::vector<std::string> select_holdout(std::span<const corpus::CaseRecord> cases, std::size_t test_size,
                                        std::uint64_t seed) {
    if (test_size >= cases.size()) {
        throw Error("holdout size " + std::to_string(test_size) + " must be smaller than the corpus (" +
                    std::to_string(cases.size()) + " cases)");
    }
    std::vector<std::size_t> order(cases.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    detail::Rng rng(seed);
    rng.shuffle(order);
    std::vector<std::string> ids;
    ids.reserve(test_size);
    for (std::size_t i = 0; i < test_size; ++i) ids.push_back(cases[order[i]].case_id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

EvalOutcome run_all(std::span<const corpus::CaseRecord> cases, std::span<const corpus::LawEntry> laws,
                    std::span<const corpus::GoldLabel> gold, std::span<const std::string> test_ids,
                    const RunOptions& options,
                    std::optional<std::span<const std::string>> graph_ids) {
    std::unordered_map<std::string_view, const corpus::CaseRecord*> by_id;
    for (const auto& rec : cases) by_id[rec.case_id] = &rec;

    std::unordered_set<std::string> test_set;
    for (const auto& id : test_ids) {
        if (!by_id.count(id)) throw Error("holdout case '" + id + "' is not in the corpus");
        if (!test_set.insert(id).second) throw Error("duplicate holdout case '" + id + "'");
    }

    std::vector<const corpus::CaseRecord*> graph_cases;
    if (graph_ids) {
        std::unordered_set<std::string> seen;
        for (const auto& id : *graph_ids) {
            if (test_set.count(id)) {
                throw Error("holdout and graph sets overlap at case '" + id + "'");
            }
            auto it = by_id.find(id);
            if (it == by_id.end()) throw Error("graph case '" + id + "' is not in the corpus");
            if (!seen.insert(id).second) throw Error("duplicate graph case '" + id + "'");
            graph_cases.push_back(it->second);
        }
    } else {
        for (const auto& rec : cases) {
            if (!test_set.count(rec.case_id)) graph_cases.push_back(&rec);
        }
    }
    if (graph_cases.empty()) throw Error("holdout leaves no cases to build the graph from");

    // Extraction over graph cases only; the held-out cases never touch the
    // graph or the index.
    extract::LawMatcher matcher(laws, options.match);
    std::vector<extract::ExtractionRecord> records;
    records.reserve(graph_cases.size());
    for (const auto* rec : graph_cases) {
        records.push_back(extract::extract_all(*rec, matcher));
    }
    kgraph::HeteroGraph graph = kgraph::build_graph(records, laws);

    bm25::Bm25Index law_index = build_law_index(laws);
    std::vector<corpus::CaseRecord> graph_case_values;
    graph_case_values.reserve(graph_cases.size());
    for (const auto* rec : graph_cases) graph_case_values.push_back(*rec);
    bm25::Bm25Index case_index = build_case_index(graph_case_values, options.case_query_section);

    // Held-out integrity, checked structurally on every invocation.
    for (const auto& id : test_ids) {
        if (graph.has_node(id)) throw Error("holdout integrity violated: test case '" + id + "' is a graph node");
        if (case_index.contains(id)) {
            throw Error("holdout integrity violated: test case '" + id + "' is in the case index");
        }
    }

    std::vector<std::string> sorted_test(test_ids.begin(), test_ids.end());
    std::sort(sorted_test.begin(), sorted_test.end());

    EvalOutcome outcome;
    outcome.test_ids = sorted_test;
    for (const auto* rec : graph_cases) outcome.graph_case_ids.push_back(rec->case_id);
    outcome.graph_node_ids = graph.node_ids();
    outcome.index_doc_ids = case_index.doc_ids();

    for (const RunSpec& spec : standard_runs()) {
        RunResult result;
        result.spec = spec;
        result.predictions.reserve(sorted_test.size());
        for (const auto& id : sorted_test) {
            const corpus::CaseRecord& query = *by_id.at(id);
            std::set<std::string> predicted;
            switch (spec.method) {
                case 1:
                    predicted = method1_case_law(query, *spec.section, law_index, options.params);
                    break;
                case 2:
                    predicted = method2_mixed(query, law_index, *spec.agg, options.params);
                    break;
                case 3:
                    predicted = method3_case_case(query, case_index, graph, spec.k, spec.agg,
                                                  options.params, options.case_query_section);
                    break;
                case 4: {
                    extract::MetaFields meta = extract::extract_meta(query);
                    if (meta.domain_name.empty() ||
                        !graph.has_node(kgraph::domain_node_id(meta.domain_name))) {
                        predicted.clear(); // domain unseen in the graph half
                    } else {
                        predicted = method4_domain_case_case(query, case_index, graph, spec.k, spec.agg,
                                                             options.params, options.case_query_section);
                    }
                    break;
                }
                default:
                    throw Error("unknown method " + std::to_string(spec.method));
            }
            result.predictions.push_back(QueryPrediction{id, std::move(predicted)});
        }
        result.metrics = evaluate(result.predictions, gold);
        outcome.results.push_back(std::move(result));
    }
    return outcome;
}

ordered_json results_to_json(std::span<const RunResult> results) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : results) {
        ordered_json row;
        row["run"] = r.spec.run;
        row["method"] = r.spec.method;
        row["description"] = r.spec.description;
        row["f1"] = r.metrics.f1;
        row["recall"] = r.metrics.recall;
        row["precision"] = r.metrics.precision;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string results_to_tsv(std::span<const RunResult> results) {
    // Numbers serialize exactly as in the JSON form so the two formats never
    // disagree on values.
    std::string out = "run\tmethod\tdescription\tf1\trecall\tprecision\n";
    for (const auto& r : results) {
        out += std::to_string(r.spec.run);
        out += '\t';
        out += std::to_string(r.spec.method);
        out += '\t';
        out += r.spec.description;
        out += '\t';
        out += ordered_json(r.metrics.f1).dump();
        out += '\t';
        out += ordered_json(r.metrics.recall).dump();
        out += '\t';
        out += ordered_json(r.metrics.precision).dump();
        out += '\n';
    }
    return out;
}

} // namespace lawkg::retrieval
