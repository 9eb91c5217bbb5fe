#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lawkg/bm25.hpp"
#include "lawkg/corpus.hpp"
#include "lawkg/extract.hpp"
#include "lawkg/kgraph.hpp"

namespace lawkg::retrieval {

/// Which case part feeds a BM25 query.
enum class QuerySection { content, judgment, decision };

enum class AggMode { Union, Intersection };

std::string_view to_string(QuerySection s);
std::string_view to_string(AggMode m);
std::optional<QuerySection> parse_query_section(std::string_view s);
std::optional<AggMode> parse_agg_mode(std::string_view s);

/// Fold of standard set union / intersection over a non-empty list.
/// An empty intersection yields the empty set.
std::set<std::string> aggregate(const std::vector<std::set<std::string>>& sets, AggMode mode);

/// One of the 11 standard run configurations.
struct RunSpec {
    int run = 0;
    int method = 0;
    std::string description;
    std::optional<QuerySection> section; // method 1
    int k = 0;                           // methods 3-4
    std::optional<AggMode> agg;          // methods 2-4
};

/// The 11 runs, in table order: method 1 over the three case parts, method 2
/// union/intersection, methods 3 and 4 with top-1 and top-2 (union and
/// intersection) similar cases.
const std::vector<RunSpec>& standard_runs();
std::string_view method_name(int method);

struct Metrics {
    double f1 = 0;
    double recall = 0;
    double precision = 0;
};

struct QueryPrediction {
    std::string case_id;
    std::set<std::string> predicted_laws;
};

struct RunResult {
    RunSpec spec;
    Metrics metrics;
    std::vector<QueryPrediction> predictions;
};

/// Law documents indexed by law name plus aliases; doc ids are law ids.
bm25::Bm25Index build_law_index(std::span<const corpus::LawEntry> laws);

/// Query text for case-case search: one section, or nullopt for the whole
/// body (all four sections concatenated).
std::string case_query_text(const corpus::CaseRecord& rec, std::optional<QuerySection> section);

/// Case documents indexed by their query text; doc ids are case ids.
bm25::Bm25Index build_case_index(std::span<const corpus::CaseRecord> cases,
                                 std::optional<QuerySection> section = std::nullopt);

/// Method 1, case-law matching: the top-1 law retrieved by the section text,
/// or the empty set when nothing scores above zero.
std::set<std::string> method1_case_law(const corpus::CaseRecord& rec, QuerySection section,
                                       const bm25::Bm25Index& law_index, const bm25::Bm25Params& params);

/// Method 2: aggregate of method 1 over all three sections.
std::set<std::string> method2_mixed(const corpus::CaseRecord& rec, const bm25::Bm25Index& law_index,
                                    AggMode mode, const bm25::Bm25Params& params);

/// Method 3, case-case matching over the knowledge graph: the top-k similar
/// cases' BasedOn law sets, aggregated (mode required for k > 1).
std::set<std::string> method3_case_case(const corpus::CaseRecord& query,
                                        const bm25::Bm25Index& case_index, const kgraph::HeteroGraph& g,
                                        int k, std::optional<AggMode> mode, const bm25::Bm25Params& params,
                                        std::optional<QuerySection> query_section = std::nullopt);

/// Method 4: method 3 with the candidate list restricted to cases sharing
/// the query's domain (the Case-Domain-Case reduction). Errors when the
/// domain is absent from the graph.
std::set<std::string> method4_domain_case_case(const corpus::CaseRecord& query,
                                               const bm25::Bm25Index& case_index,
                                               const kgraph::HeteroGraph& g, int k,
                                               std::optional<AggMode> mode, const bm25::Bm25Params& params,
                                               std::optional<QuerySection> query_section = std::nullopt);

/// Macro-averaged precision/recall/F1 over queries, computed in exact
/// rational arithmetic and converted to double at the end. Per query:
/// P = |pred ∩ gold| / |pred| (0 for empty pred), R = |pred ∩ gold| / |gold|,
/// F1 = 2PR/(P+R) (0 when P+R = 0). Every prediction needs a non-empty gold
/// entry.
Metrics evaluate(std::span<const QueryPrediction> predictions, std::span<const corpus::GoldLabel> gold);

/// Seeded uniform sample of test case ids (ascending), sized test_size.
std::vector<std::string> select_holdout(std::span<const corpus::CaseRecord> cases, std::size_t test_size,
                                        std::uint64_t seed);

struct RunOptions {
    bm25::Bm25Params params;
    extract::LawMatchConfig match;
    /// Query/case-index text for methods 3-4; nullopt = full body.
    std::optional<QuerySection> case_query_section;
};

/// Everything run_all produced, plus the structural audit trail: which cases
/// were held out, which went into the graph, and the ids the case index
/// actually contains.
struct EvalOutcome {
    std::vector<RunResult> results;
    std::vector<std::string> test_ids;
    std::vector<std::string> graph_case_ids;
    std::vector<std::string> graph_node_ids;
    std::vector<std::string> index_doc_ids;
};

/// Executes the 11 standard runs on a holdout split. Test cases are excluded
/// from the graph and the case index, and that exclusion is re-checked
/// structurally before any query runs. Test queries whose domain is absent
/// from the graph contribute empty predictions in runs 9-11 (the CLI query
/// command surfaces the same situation as an error instead).
EvalOutcome run_all(std::span<const corpus::CaseRecord> cases, std::span<const corpus::LawEntry> laws,
                    std::span<const corpus::GoldLabel> gold, std::span<const std::string> test_ids,
                    const RunOptions& options,
                    std::optional<std::span<const std::string>> graph_ids = std::nullopt);

nlohmann::ordered_json results_to_json(std::span<const RunResult> results);
std::string results_to_tsv(std::span<const RunResult> results);

} // namespace lawkg::retrieval
