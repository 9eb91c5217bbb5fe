// lawkg -- command-line front end for the legal knowledge-graph toolkit.
//
// Subcommands: gen, ingest, extract, graph build, graph stats, query, eval.
// Every command validates its inputs and exits nonzero with a stage-named
// message; nothing proceeds past a schema violation.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lawkg/bm25.hpp"
#include "lawkg/corpus.hpp"
#include "lawkg/error.hpp"
#include "lawkg/extract.hpp"
#include "lawkg/kgraph.hpp"
#include "lawkg/retrieval.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct PipelineConfig {
    lawkg::bm25::Bm25Params params;
    lawkg::extract::LawMatchConfig match;
    lawkg::corpus::SectionMarkerConfig markers = lawkg::corpus::SectionMarkerConfig::defaults();
    std::optional<lawkg::retrieval::QuerySection> case_query_section; // nullopt = full body
};

PipelineConfig load_config(const std::string& path) {
    PipelineConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw lawkg::Error("cannot open config file " + path);
    json obj = json::parse(in, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) throw lawkg::Error("malformed config file " + path);
    if (auto it = obj.find("bm25"); it != obj.end()) {
        cfg.params.k1 = it->value("k1", cfg.params.k1);
        cfg.params.b = it->value("b", cfg.params.b);
    }
    if (auto it = obj.find("match"); it != obj.end()) {
        cfg.match.score_threshold = it->value("score_threshold", cfg.match.score_threshold);
        cfg.match.lowercase = it->value("lowercase", cfg.match.lowercase);
        cfg.match.strip_years = it->value("strip_years", cfg.match.strip_years);
        std::string tie = it->value("tie_break", std::string{"latest_year"});
        if (tie == "latest_year") {
            cfg.match.tie_break = lawkg::extract::TieBreak::latest_year;
        } else if (tie == "lexicographic") {
            cfg.match.tie_break = lawkg::extract::TieBreak::lexicographic;
        } else {
            throw lawkg::Error("config: unknown tie_break '" + tie + "'");
        }
    }
    if (auto it = obj.find("markers"); it != obj.end()) {
        auto read_list = [&](const char* key, std::vector<std::string>& dst) {
            if (auto l = it->find(key); l != it->end()) {
                dst = l->get<std::vector<std::string>>();
            }
        };
        read_list("content", cfg.markers.content);
        read_list("judgment", cfg.markers.judgment);
        read_list("decision", cfg.markers.decision);
    }
    if (auto it = obj.find("case_query_section"); it != obj.end() && it->is_string()) {
        std::string s = it->get<std::string>();
        if (s != "full") {
            auto parsed = lawkg::retrieval::parse_query_section(s);
            if (!parsed) throw lawkg::Error("config: unknown case_query_section '" + s + "'");
            cfg.case_query_section = parsed;
        }
    }
    return cfg;
}

void write_text(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw lawkg::Error("cannot write " + path.string());
    out << body;
    if (!out) throw lawkg::Error("write failed for " + path.string());
}

int cmd_gen(std::uint64_t seed, const lawkg::corpus::GeneratorParams& params, const std::string& out_dir,
            bool quiet) {
    auto corpus = lawkg::corpus::generate_corpus(seed, params);
    std::filesystem::create_directories(out_dir);
    std::filesystem::path dir(out_dir);
    lawkg::corpus::save_cases(dir / "cases.jsonl", corpus.cases);
    lawkg::corpus::save_laws(dir / "laws.jsonl", corpus.laws);
    lawkg::corpus::save_gold(dir / "gold.jsonl", corpus.gold);
    if (!quiet) {
        std::cout << "wrote " << corpus.cases.size() << " cases, " << corpus.laws.size() << " laws, "
                  << corpus.gold.size() << " gold labels to " << out_dir << "\n";
    }
    return 0;
}

int cmd_ingest(const std::string& cases_path, const std::string& laws_path, const std::string& gold_path,
               const std::string& out_dir, const PipelineConfig& cfg, bool quiet) {
    std::filesystem::create_directories(out_dir);
    std::filesystem::path dir(out_dir);
    std::vector<lawkg::corpus::LawEntry> laws;
    if (!laws_path.empty()) {
        laws = lawkg::corpus::load_laws(laws_path);
        lawkg::corpus::save_laws(dir / "laws.jsonl", laws);
    }
    auto cases = lawkg::corpus::load_cases(cases_path, cfg.markers);
    lawkg::corpus::save_cases(dir / "cases.jsonl", cases);
    std::size_t gold_count = 0;
    if (!gold_path.empty()) {
        auto gold = laws_path.empty() ? lawkg::corpus::load_gold(gold_path)
                                      : lawkg::corpus::load_gold(gold_path, laws);
        lawkg::corpus::save_gold(dir / "gold.jsonl", gold);
        gold_count = gold.size();
    }
    if (!quiet) {
        std::cout << "ingested " << cases.size() << " cases, " << laws.size() << " laws, " << gold_count
                  << " gold labels into " << out_dir << "\n";
    }
    return 0;
}

int cmd_extract(const std::string& cases_path, const std::string& laws_path, const std::string& out_path,
                const PipelineConfig& cfg, bool quiet) {
    auto cases = lawkg::corpus::load_cases(cases_path, cfg.markers);
    auto laws = lawkg::corpus::load_laws(laws_path);
    lawkg::extract::LawMatcher matcher(laws, cfg.match);
    std::vector<lawkg::extract::ExtractionRecord> records;
    records.reserve(cases.size());
    for (const auto& rec : cases) {
        records.push_back(lawkg::extract::extract_all(rec, matcher));
    }
    lawkg::extract::save_records(out_path, records);
    if (!quiet) {
        std::size_t linked = 0;
        for (const auto& r : records) linked += r.cited_laws.size();
        std::cout << "extracted " << records.size() << " records (" << linked
                  << " case-law links) to " << out_path << "\n";
    }
    return 0;
}

int cmd_graph_build(const std::string& records_path, const std::string& laws_path,
                    const std::string& out_dir, bool quiet) {
    auto records = lawkg::extract::load_records(records_path);
    auto laws = lawkg::corpus::load_laws(laws_path);
    auto graph = lawkg::kgraph::build_graph(records, laws);
    lawkg::kgraph::export_graph(graph, out_dir);
    if (!quiet) {
        std::cout << "built graph with " << graph.node_count() << " nodes and " << graph.edge_count()
                  << " edges in " << out_dir << "\n";
    }
    return 0;
}

int cmd_graph_stats(const std::string& graph_dir, const std::string& nodes_path,
                    const std::string& edges_path, bool undirected) {
    lawkg::kgraph::HeteroGraph graph =
        !graph_dir.empty() ? lawkg::kgraph::import_graph(graph_dir)
                           : lawkg::kgraph::import_graph(nodes_path, edges_path);
    auto stats = lawkg::kgraph::graph_stats(graph);
    std::cout << lawkg::kgraph::stats_to_json(stats, undirected).dump(2) << "\n";
    return 0;
}

int cmd_query(int method, const std::string& case_path, const std::string& laws_path,
              const std::string& cases_path, const std::string& graph_dir, const std::string& section_name,
              int k, const std::string& agg_name, const PipelineConfig& cfg) {
    auto query_cases = lawkg::corpus::load_cases(case_path, cfg.markers);
    if (query_cases.size() != 1) {
        throw lawkg::Error("query case file must contain exactly one record, found " +
                           std::to_string(query_cases.size()));
    }
    const auto& query = query_cases.front();

    std::optional<lawkg::retrieval::QuerySection> section;
    if (!section_name.empty()) {
        section = lawkg::retrieval::parse_query_section(section_name);
        if (!section) throw lawkg::Error("unknown section '" + section_name + "'");
    }
    std::optional<lawkg::retrieval::AggMode> agg;
    if (!agg_name.empty()) {
        agg = lawkg::retrieval::parse_agg_mode(agg_name);
        if (!agg) throw lawkg::Error("unknown aggregation mode '" + agg_name + "'");
    }

    std::set<std::string> predicted;
    if (method == 1 || method == 2) {
        if (laws_path.empty()) throw lawkg::Error("--laws is required for methods 1 and 2");
        auto laws = lawkg::corpus::load_laws(laws_path);
        auto law_index = lawkg::retrieval::build_law_index(laws);
        if (method == 1) {
            predicted = lawkg::retrieval::method1_case_law(
                query, section.value_or(lawkg::retrieval::QuerySection::decision), law_index, cfg.params);
        } else {
            predicted = lawkg::retrieval::method2_mixed(
                query, law_index, agg.value_or(lawkg::retrieval::AggMode::Union), cfg.params);
        }
    } else if (method == 3 || method == 4) {
        if (cases_path.empty() || graph_dir.empty()) {
            throw lawkg::Error("--cases and --graph are required for methods 3 and 4");
        }
        auto graph = lawkg::kgraph::import_graph(graph_dir);
        auto all_cases = lawkg::corpus::load_cases(cases_path, cfg.markers);
        std::vector<lawkg::corpus::CaseRecord> graph_cases;
        for (auto& rec : all_cases) {
            if (rec.case_id == query.case_id) continue; // the query never self-matches
            if (!graph.has_node(rec.case_id)) continue;
            if (graph.node_type(rec.case_id) != lawkg::kgraph::NodeType::Case) continue;
            graph_cases.push_back(std::move(rec));
        }
        auto case_index = lawkg::retrieval::build_case_index(graph_cases, cfg.case_query_section);
        if (method == 3) {
            predicted = lawkg::retrieval::method3_case_case(query, case_index, graph, k, agg, cfg.params,
                                                            cfg.case_query_section);
        } else {
            predicted = lawkg::retrieval::method4_domain_case_case(query, case_index, graph, k, agg,
                                                                   cfg.params, cfg.case_query_section);
        }
    } else {
        throw lawkg::Error("method must be 1, 2, 3, or 4");
    }

    ordered_json out;
    out["case_id"] = query.case_id;
    out["method"] = method;
    if (section) out["section"] = lawkg::retrieval::to_string(*section);
    if (method >= 3) out["k"] = k;
    if (agg) out["agg"] = lawkg::retrieval::to_string(*agg);
    out["predicted_laws"] = predicted;
    std::cout << out.dump(2) << "\n";
    return 0;
}

std::vector<int> parse_runs(const std::string& runs_arg) {
    std::vector<int> runs;
    if (runs_arg == "all" || runs_arg.empty()) {
        for (int i = 1; i <= 11; ++i) runs.push_back(i);
        return runs;
    }
    std::size_t start = 0;
    while (start <= runs_arg.size()) {
        std::size_t comma = runs_arg.find(',', start);
        std::string piece = runs_arg.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!piece.empty()) {
            int run = 0;
            try {
                run = std::stoi(piece);
            } catch (...) {
                throw lawkg::Error("invalid --runs value '" + piece + "'");
            }
            if (run < 1 || run > 11) throw lawkg::Error("run ids must be in 1..11");
            runs.push_back(run);
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (runs.empty()) throw lawkg::Error("--runs selected nothing");
    return runs;
}

int cmd_eval(const std::string& cases_path, const std::string& laws_path, const std::string& gold_path,
             std::size_t holdout, std::uint64_t seed, const std::string& runs_arg,
             const std::string& out_dir, const PipelineConfig& cfg, const std::string& format, bool quiet) {
    auto cases = lawkg::corpus::load_cases(cases_path, cfg.markers);
    auto laws = lawkg::corpus::load_laws(laws_path);
    auto gold = lawkg::corpus::load_gold(gold_path, laws);
    std::vector<int> selected = parse_runs(runs_arg);

    auto test_ids = lawkg::retrieval::select_holdout(cases, holdout, seed);
    lawkg::retrieval::RunOptions options;
    options.params = cfg.params;
    options.match = cfg.match;
    options.case_query_section = cfg.case_query_section;
    auto outcome = lawkg::retrieval::run_all(cases, laws, gold, test_ids, options);

    std::vector<lawkg::retrieval::RunResult> results;
    for (const auto& r : outcome.results) {
        if (std::find(selected.begin(), selected.end(), r.spec.run) != selected.end()) {
            results.push_back(r);
        }
    }

    std::filesystem::create_directories(out_dir);
    std::filesystem::path dir(out_dir);
    write_text(dir / "results.json", lawkg::retrieval::results_to_json(results).dump(2) + "\n");
    write_text(dir / "results.tsv", lawkg::retrieval::results_to_tsv(results));

    std::unordered_map<std::string, const std::set<std::string>*> gold_by_case;
    for (const auto& label : gold) gold_by_case[label.case_id] = &label.gold_laws;
    {
        std::ofstream out(dir / "predictions.jsonl", std::ios::binary);
        if (!out) throw lawkg::Error("cannot write " + (dir / "predictions.jsonl").string());
        for (const auto& r : results) {
            for (const auto& p : r.predictions) {
                ordered_json row;
                row["case_id"] = p.case_id;
                row["run"] = r.spec.run;
                row["predicted_laws"] = p.predicted_laws;
                row["gold_laws"] = *gold_by_case.at(p.case_id);
                out << row.dump() << '\n';
            }
        }
    }
    {
        ordered_json audit;
        audit["test_case_ids"] = outcome.test_ids;
        audit["graph_case_ids"] = outcome.graph_case_ids;
        audit["graph_node_ids"] = outcome.graph_node_ids;
        audit["index_doc_ids"] = outcome.index_doc_ids;
        audit["holdout_integrity"] = "verified";
        write_text(dir / "eval_audit.json", audit.dump() + "\n");
    }

    if (!quiet) {
        if (format == "json") {
            std::cout << lawkg::retrieval::results_to_json(results).dump(2) << "\n";
        } else {
            std::cout << lawkg::retrieval::results_to_tsv(results);
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lawkg: knowledge-graph construction and relevant-law retrieval for legal cases"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string format = "tsv";
    bool quiet = false;
    app.add_option("--config", config_path, "JSON config file (bm25, match, markers)");
    app.add_option("--format", format, "Output format for tables: tsv or json")
        ->check(CLI::IsMember({"tsv", "json"}));
    app.add_flag("--quiet", quiet, "Suppress progress output");

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a deterministic synthetic corpus");
    std::uint64_t gen_seed = 1;
    lawkg::corpus::GeneratorParams gen_params;
    std::string gen_out;
    gen->add_option("--seed", gen_seed, "Random seed");
    gen->add_option("--cases", gen_params.cases, "Number of cases");
    gen->add_option("--laws", gen_params.laws, "Number of laws");
    gen->add_option("--domains", gen_params.domains, "Number of domains");
    gen->add_option("--courts", gen_params.courts, "Number of courts");
    gen->add_option("--noise", gen_params.noise, "Citation corruption rate in [0,1]");
    gen->add_option("--mean-citations", gen_params.mean_citations, "Mean laws cited per case");
    gen->add_option("--family-size", gen_params.family_size, "Cases per paraphrase family");
    gen->add_option("--out", gen_out, "Output directory")->required();

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Validate and normalize JSONL inputs");
    std::string in_cases, in_laws, in_gold, in_out;
    ingest->add_option("--cases", in_cases, "cases.jsonl")->required();
    ingest->add_option("--laws", in_laws, "laws.jsonl");
    ingest->add_option("--gold", in_gold, "gold.jsonl");
    ingest->add_option("--out", in_out, "Output directory")->required();

    // extract
    auto* extract_cmd = app.add_subcommand("extract", "Extract entities and citation links");
    std::string ex_cases, ex_laws, ex_out = "records.jsonl";
    extract_cmd->add_option("--cases", ex_cases, "cases.jsonl")->required();
    extract_cmd->add_option("--laws", ex_laws, "laws.jsonl")->required();
    extract_cmd->add_option("--out", ex_out, "Output records.jsonl");

    // graph build / graph stats
    auto* graph = app.add_subcommand("graph", "Knowledge-graph operations");
    graph->require_subcommand(1);
    auto* gb = graph->add_subcommand("build", "Build nodes.jsonl/edges.jsonl from extraction records");
    std::string gb_records, gb_laws, gb_out;
    gb->add_option("--records", gb_records, "records.jsonl")->required();
    gb->add_option("--laws", gb_laws, "laws.jsonl")->required();
    gb->add_option("--out", gb_out, "Output directory")->required();
    auto* gs = graph->add_subcommand("stats", "Print graph statistics as JSON");
    std::string gs_dir, gs_nodes, gs_edges;
    bool gs_undirected = false;
    gs->add_option("--graph", gs_dir, "Directory holding nodes.jsonl and edges.jsonl");
    gs->add_option("--nodes", gs_nodes, "nodes.jsonl");
    gs->add_option("--edges", gs_edges, "edges.jsonl");
    gs->add_flag("--undirected-density", gs_undirected, "Also report 2|E|/(|V|(|V|-1))");

    // query
    auto* query = app.add_subcommand("query", "Predict relevant laws for one case");
    int q_method = 1, q_k = 1;
    std::string q_case, q_laws, q_cases, q_graph, q_section, q_agg;
    query->add_option("--method", q_method, "Retrieval method 1-4")->required();
    query->add_option("--case", q_case, "Query case file (one JSONL record)")->required();
    query->add_option("--laws", q_laws, "laws.jsonl (methods 1-2)");
    query->add_option("--cases", q_cases, "cases.jsonl backing the graph (methods 3-4)");
    query->add_option("--graph", q_graph, "Graph directory (methods 3-4)");
    query->add_option("--section", q_section, "content|judgment|decision (method 1)");
    query->add_option("--k", q_k, "Similar-case count (methods 3-4)");
    query->add_option("--agg", q_agg, "union|intersection");

    // eval
    auto* eval = app.add_subcommand("eval", "Run the retrieval benchmark on a holdout split");
    std::string ev_cases, ev_laws, ev_gold, ev_runs = "all", ev_out = "eval-out";
    std::size_t ev_holdout = 500;
    std::uint64_t ev_seed = 1;
    eval->add_option("--cases", ev_cases, "cases.jsonl")->required();
    eval->add_option("--laws", ev_laws, "laws.jsonl")->required();
    eval->add_option("--gold", ev_gold, "gold.jsonl")->required();
    eval->add_option("--holdout", ev_holdout, "Held-out test-set size");
    eval->add_option("--seed", ev_seed, "Holdout selection seed");
    eval->add_option("--runs", ev_runs, "Run ids to report: all or comma list");
    eval->add_option("--out", ev_out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    std::string stage = app.get_subcommands().front()->get_name();
    try {
        PipelineConfig cfg = load_config(config_path);
        if (gen->parsed()) return cmd_gen(gen_seed, gen_params, gen_out, quiet);
        if (ingest->parsed()) return cmd_ingest(in_cases, in_laws, in_gold, in_out, cfg, quiet);
        if (extract_cmd->parsed()) return cmd_extract(ex_cases, ex_laws, ex_out, cfg, quiet);
        if (graph->parsed()) {
            if (gb->parsed()) {
                stage = "graph build";
                return cmd_graph_build(gb_records, gb_laws, gb_out, quiet);
            }
            if (gs->parsed()) {
                stage = "graph stats";
                if (gs_dir.empty() && (gs_nodes.empty() || gs_edges.empty())) {
                    throw lawkg::Error("provide --graph DIR or both --nodes and --edges");
                }
                return cmd_graph_stats(gs_dir, gs_nodes, gs_edges, gs_undirected);
            }
        }
        if (query->parsed()) {
            return cmd_query(q_method, q_case, q_laws, q_cases, q_graph, q_section, q_k, q_agg, cfg);
        }
        if (eval->parsed()) {
            return cmd_eval(ev_cases, ev_laws, ev_gold, ev_holdout, ev_seed, ev_runs, ev_out, cfg, format,
                            quiet);
        }
    } catch (const std::exception& e) {
        std::cerr << "lawkg " << stage << ": error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
