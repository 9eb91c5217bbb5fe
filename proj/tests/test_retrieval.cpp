#include <doctest.h>

#include <algorithm>
#include <random>

#include <nlohmann/json.hpp>

#include "lawkg/error.hpp"
#include "lawkg/retrieval.hpp"
#include "support/oracles.hpp"

using namespace lawkg;
using retrieval::AggMode;
using retrieval::QuerySection;

namespace {

std::set<std::string> S(std::initializer_list<const char*> xs) {
    std::set<std::string> out;
    for (const char* x : xs) out.insert(x);
    return out;
}

corpus::CaseRecord make_case(const std::string& id, const std::string& domain, const std::string& content,
                             const std::string& judgment, const std::string& decision) {
    corpus::CaseRecord rec;
    rec.case_id = id;
    rec.court_name = "Tòa án nhân dân tỉnh Thử Nghiệm";
    rec.domain_name = domain;
    rec.sections.introduction = "Về việc: " + domain + "\n";
    rec.sections.content = content;
    rec.sections.judgment = judgment;
    rec.sections.decision = decision;
    return rec;
}

/// Five laws with pairwise disjoint content words; BM25 scores are provable
/// by inspection because a query only ever shares tokens with one law.
std::vector<corpus::LawEntry> disjoint_laws() {
    return {
        {"l1", "Luật Alpha Beta", std::nullopt, {}},
        {"l2", "Luật Gamma Delta", std::nullopt, {}},
        {"l3", "Luật Epsilon Zeta", std::nullopt, {}},
        {"l4", "Luật Eta Theta", std::nullopt, {}},
        {"l5", "Luật Iota Kappa", std::nullopt, {}},
    };
}

struct GraphFixture {
    std::vector<corpus::LawEntry> laws = disjoint_laws();
    std::vector<corpus::CaseRecord> graph_cases;
    kgraph::HeteroGraph graph;
    bm25::Bm25Index case_index;

    GraphFixture(std::vector<corpus::CaseRecord> cases,
                 const std::vector<std::set<std::string>>& cited) {
        graph_cases = std::move(cases);
        std::vector<extract::ExtractionRecord> records;
        for (std::size_t i = 0; i < graph_cases.size(); ++i) {
            extract::ExtractionRecord rec;
            rec.case_id = graph_cases[i].case_id;
            rec.court_name = graph_cases[i].court_name;
            rec.domain_name = graph_cases[i].domain_name;
            rec.cited_laws = cited[i];
            records.push_back(std::move(rec));
        }
        graph = kgraph::build_graph(records, laws);
        case_index = retrieval::build_case_index(graph_cases);
    }
};

} // namespace

TEST_SUITE_BEGIN("retrieval");

TEST_CASE("aggregate implements standard set algebra") {
    std::vector<std::set<std::string>> two = {S({"L1", "L2"}), S({"L2", "L3"})};
    CHECK(retrieval::aggregate(two, AggMode::Union) == S({"L1", "L2", "L3"}));
    CHECK(retrieval::aggregate(two, AggMode::Intersection) == S({"L2"}));

    std::vector<std::set<std::string>> disjoint = {S({"L1"}), S({"L2"})};
    CHECK(retrieval::aggregate(disjoint, AggMode::Intersection).empty());

    std::vector<std::set<std::string>> one = {S({"L9"})};
    CHECK(retrieval::aggregate(one, AggMode::Union) == S({"L9"}));
    CHECK(retrieval::aggregate(one, AggMode::Intersection) == S({"L9"}));

    CHECK_THROWS_WITH_AS(retrieval::aggregate({}, AggMode::Union), doctest::Contains("at least one"),
                         Error);
}

TEST_CASE("standard_runs lists the 11 table configurations in order") {
    const auto& runs = retrieval::standard_runs();
    REQUIRE(runs.size() == 11);
    for (int i = 0; i < 11; ++i) CHECK(runs[i].run == i + 1);
    CHECK(runs[0].method == 1);
    CHECK(runs[0].section == QuerySection::content);
    CHECK(runs[2].description == "Court's decision");
    CHECK(runs[4].agg == AggMode::Intersection);
    CHECK(runs[5].method == 3);
    CHECK(runs[5].k == 1);
    CHECK(runs[9].method == 4);
    CHECK(runs[9].agg == AggMode::Union);
    CHECK(retrieval::method_name(4) == "Domain case-case matching and KG");
}

TEST_CASE("method1 returns the provable top-1 law or nothing") {
    auto laws = disjoint_laws();
    auto law_index = retrieval::build_law_index(laws);
    bm25::Bm25Params params;

    // The decision names exactly one law's words: only l1 scores > 0.
    auto rec = make_case("q1", "Dân sự", "", "", "Căn cứ Alpha Beta;");
    CHECK(retrieval::method1_case_law(rec, QuerySection::decision, law_index, params) == S({"l1"}));

    auto empty = make_case("q2", "Dân sự", "", "", "");
    CHECK(retrieval::method1_case_law(empty, QuerySection::decision, law_index, params).empty());

    auto foreign = make_case("q3", "Dân sự", "", "", "không chung từ nào cả");
    CHECK(retrieval::method1_case_law(foreign, QuerySection::decision, law_index, params).empty());
}

TEST_CASE("method2 aggregates the three section results") {
    auto laws = disjoint_laws();
    auto law_index = retrieval::build_law_index(laws);
    bm25::Bm25Params params;

    // All three sections point at the same law: both modes agree.
    auto same = make_case("s", "Dân sự", "Alpha Beta", "Alpha Beta", "Alpha Beta");
    CHECK(retrieval::method2_mixed(same, law_index, AggMode::Union, params) == S({"l1"}));
    CHECK(retrieval::method2_mixed(same, law_index, AggMode::Intersection, params) == S({"l1"}));

    // Three different laws: union of three singletons, empty intersection.
    auto mixed = make_case("m", "Dân sự", "Alpha Beta", "Gamma Delta", "Epsilon Zeta");
    CHECK(retrieval::method2_mixed(mixed, law_index, AggMode::Union, params) == S({"l1", "l2", "l3"}));
    CHECK(retrieval::method2_mixed(mixed, law_index, AggMode::Intersection, params).empty());

    // Compositional identity with aggregate(method1...).
    std::vector<std::set<std::string>> parts;
    for (QuerySection s : {QuerySection::content, QuerySection::judgment, QuerySection::decision}) {
        parts.push_back(retrieval::method1_case_law(mixed, s, law_index, params));
    }
    CHECK(retrieval::method2_mixed(mixed, law_index, AggMode::Union, params) ==
          retrieval::aggregate(parts, AggMode::Union));
}

TEST_CASE("method3 collects candidate laws through the graph") {
    GraphFixture fx(
        {
            make_case("g1", "Dân sự", "chuyện riêng một", "", "một hai ba"),
            make_case("g2", "Dân sự", "chuyện riêng hai", "", "bốn năm sáu"),
        },
        {S({"l1", "l4"}), S({"l2"})});
    bm25::Bm25Params params;

    // Query overlaps only g1's text, so top-1 is g1 and its laws come back.
    auto q = make_case("q", "Dân sự", "chuyện riêng một", "", "một hai ba");
    CHECK(retrieval::method3_case_case(q, fx.case_index, fx.graph, 1, std::nullopt, params) ==
          S({"l1", "l4"}));

    // k=2 with union/intersection over both graph cases.
    GraphFixture fx2(
        {
            make_case("g1", "Dân sự", "vụ việc chung", "", "một"),
            make_case("g2", "Dân sự", "vụ việc chung", "", "hai"),
        },
        {S({"l1", "l2"}), S({"l2", "l3"})});
    auto q2 = make_case("q", "Dân sự", "vụ việc chung", "", "");
    CHECK(retrieval::method3_case_case(q2, fx2.case_index, fx2.graph, 2, AggMode::Union, params) ==
          S({"l1", "l2", "l3"}));
    CHECK(retrieval::method3_case_case(q2, fx2.case_index, fx2.graph, 2, AggMode::Intersection, params) ==
          S({"l2"}));

    // Fewer candidates than k aggregates over what exists; zero gives the
    // empty set; a missing mode with several candidates is an error.
    auto nowhere = make_case("q", "Dân sự", "zzz", "", "");
    nowhere.sections.introduction = "zzz"; // no token shared with any indexed case
    CHECK(retrieval::method3_case_case(nowhere, fx2.case_index, fx2.graph, 2, AggMode::Union, params)
              .empty());
    GraphFixture fx3({make_case("only", "Dân sự", "vụ việc chung", "", "")}, {S({"l5"})});
    CHECK(retrieval::method3_case_case(q2, fx3.case_index, fx3.graph, 2, AggMode::Union, params) ==
          S({"l5"}));
    CHECK_THROWS_WITH_AS(
        retrieval::method3_case_case(q2, fx2.case_index, fx2.graph, 2, std::nullopt, params),
        doctest::Contains("aggregation mode required"), Error);
    CHECK_THROWS_AS(retrieval::method3_case_case(q2, fx2.case_index, fx2.graph, 0, std::nullopt, params),
                    Error);
}

TEST_CASE("method3 errors when the index and graph disagree") {
    GraphFixture fx({make_case("g1", "Dân sự", "vụ việc chung", "", "")}, {S({"l1"})});
    // An index with a doc that is not a node of the graph.
    std::vector<corpus::CaseRecord> extra = fx.graph_cases;
    extra.push_back(make_case("phantom", "Dân sự", "vụ việc chung", "", ""));
    auto bad_index = retrieval::build_case_index(extra);
    auto q = make_case("q", "Dân sự", "vụ việc chung", "", "");
    CHECK_THROWS_WITH_AS(
        retrieval::method3_case_case(q, bad_index, fx.graph, 2, AggMode::Union, bm25::Bm25Params{}),
        doctest::Contains("not a node of the graph"), Error);
}

TEST_CASE("method4 restricts candidates to the query's domain") {
    bm25::Bm25Params params;
    GraphFixture fx(
        {
            make_case("g1", "Dân sự", "vụ việc chung quen thuộc", "", ""),
            make_case("g2", "Dân sự", "vụ việc chung quen thuộc", "", ""),
            make_case("g3", "Hình sự", "vụ việc chung quen thuộc", "", ""),
        },
        {S({"l1"}), S({"l2"}), S({"l3"})});

    // g3 would be a candidate globally but is filtered out by domain.
    auto q = make_case("q", "Dân sự", "vụ việc chung quen thuộc", "", "");
    auto m3 = retrieval::method3_case_case(q, fx.case_index, fx.graph, 3, AggMode::Union, params);
    CHECK(m3 == S({"l1", "l2", "l3"}));
    auto m4 = retrieval::method4_domain_case_case(q, fx.case_index, fx.graph, 3, AggMode::Union, params);
    CHECK(m4 == S({"l1", "l2"}));

    // When every graph case shares the query's domain the restriction is
    // vacuous and method 4 equals method 3.
    GraphFixture same(
        {
            make_case("g1", "Dân sự", "vụ việc chung", "", "một"),
            make_case("g2", "Dân sự", "vụ việc khác", "", "hai"),
        },
        {S({"l1"}), S({"l2"})});
    auto q2 = make_case("q", "Dân sự", "vụ việc chung khác", "", "");
    for (int k : {1, 2}) {
        auto a = retrieval::method3_case_case(q2, same.case_index, same.graph, k, AggMode::Union, params);
        auto b = retrieval::method4_domain_case_case(q2, same.case_index, same.graph, k, AggMode::Union,
                                                     params);
        CHECK(a == b);
    }

    // A domain holding exactly one case returns that case's laws for any k.
    GraphFixture lone(
        {
            make_case("g1", "Thuế", "vụ việc thuế", "", ""),
            make_case("g2", "Dân sự", "vụ việc khác", "", ""),
        },
        {S({"l5"}), S({"l1"})});
    auto q3 = make_case("q", "Thuế", "vụ việc thuế", "", "");
    for (int k : {1, 2, 3}) {
        CHECK(retrieval::method4_domain_case_case(q3, lone.case_index, lone.graph, k, AggMode::Union,
                                                  params) == S({"l5"}));
    }

    auto alien = make_case("q", "Vũ trụ", "vụ việc chung", "", "");
    CHECK_THROWS_WITH_AS(
        retrieval::method4_domain_case_case(alien, fx.case_index, fx.graph, 1, std::nullopt, params),
        doctest::Contains("unknown domain"), Error);
}

TEST_CASE("method4 equals the two-stage brute-force oracle on a synthetic corpus") {
    auto data = corpus::generate_corpus(61, {.cases = 90, .laws = 40, .courts = 8, .domains = 5});
    extract::LawMatcher matcher(data.laws, {});
    std::vector<extract::ExtractionRecord> records;
    std::vector<corpus::CaseRecord> graph_cases(data.cases.begin() + 10, data.cases.end());
    for (const auto& rec : graph_cases) records.push_back(extract::extract_all(rec, matcher));
    auto graph = kgraph::build_graph(records, data.laws);
    auto index = retrieval::build_case_index(graph_cases);
    bm25::Bm25Params params;

    for (int qi = 0; qi < 10; ++qi) {
        const auto& query = data.cases[static_cast<std::size_t>(qi)];
        auto tokens = bm25::tokenize(query.sections.joined());

        // Stage 1: brute-force domain filter. Stage 2: global BM25 order.
        std::vector<std::pair<std::string, double>> scored;
        for (const auto& rec : graph_cases) {
            if (text::normalized_key(rec.domain_name) != text::normalized_key(query.domain_name)) continue;
            scored.emplace_back(rec.case_id, index.score(tokens, rec.case_id, params));
        }
        std::erase_if(scored, [](const auto& p) { return !(p.second > 0); });
        std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        if (scored.size() > 2) scored.resize(2);
        std::vector<std::set<std::string>> law_sets;
        for (const auto& [id, score] : scored) {
            auto laws = graph.out_neighbors(id, kgraph::RelationType::BasedOn);
            law_sets.emplace_back(laws.begin(), laws.end());
        }
        std::set<std::string> expected;
        if (!law_sets.empty()) expected = retrieval::aggregate(law_sets, AggMode::Union);

        auto got = retrieval::method4_domain_case_case(query, index, graph, 2, AggMode::Union, params);
        CHECK(got == expected);
    }
}

TEST_CASE("planted paraphrase siblings make method3 recover the gold set") {
    corpus::GeneratorParams params{.cases = 60, .laws = 30, .courts = 6, .domains = 4};
    params.family_size = 3;
    auto data = corpus::generate_corpus(71, params);
    extract::LawMatcher matcher(data.laws, {});

    // Hold out case 0; its family siblings (cases 1, 2) stay in the graph.
    std::vector<corpus::CaseRecord> graph_cases(data.cases.begin() + 1, data.cases.end());
    std::vector<extract::ExtractionRecord> records;
    for (const auto& rec : graph_cases) records.push_back(extract::extract_all(rec, matcher));
    auto graph = kgraph::build_graph(records, data.laws);
    auto index = retrieval::build_case_index(graph_cases);

    auto predicted = retrieval::method3_case_case(data.cases[0], index, graph, 1, std::nullopt, {});
    CHECK(predicted == data.gold[0].gold_laws);
}

TEST_CASE("evaluate reproduces exact rational metrics") {
    std::vector<corpus::GoldLabel> gold{{"q1", S({"a", "d"})}};
    std::vector<retrieval::QueryPrediction> pred{{"q1", S({"a", "b", "c"})}};
    auto m = retrieval::evaluate(pred, gold);
    CHECK(m.precision == 1.0 / 3.0);
    CHECK(m.recall == 0.5);
    CHECK(m.f1 == 0.4);

    std::vector<corpus::GoldLabel> gold3{{"q1", S({"a"})}, {"q2", S({"b"})}, {"q3", S({"c", "d"})}};
    std::vector<retrieval::QueryPrediction> exact{{"q1", S({"a"})}, {"q2", S({"b"})}, {"q3", S({"c", "d"})}};
    auto perfect = retrieval::evaluate(exact, gold3);
    CHECK(perfect.precision == 1.0);
    CHECK(perfect.recall == 1.0);
    CHECK(perfect.f1 == 1.0);

    std::vector<retrieval::QueryPrediction> nothing{{"q1", {}}, {"q2", {}}, {"q3", {}}};
    auto zero = retrieval::evaluate(nothing, gold3);
    CHECK(zero.precision == 0.0);
    CHECK(zero.recall == 0.0);
    CHECK(zero.f1 == 0.0);

    // Permutation invariance, bit-exact thanks to rational accumulation.
    std::vector<retrieval::QueryPrediction> mixed{{"q1", S({"a", "b"})}, {"q2", {}}, {"q3", S({"c"})}};
    auto fwd = retrieval::evaluate(mixed, gold3);
    std::reverse(mixed.begin(), mixed.end());
    auto rev = retrieval::evaluate(mixed, gold3);
    CHECK(fwd.precision == rev.precision);
    CHECK(fwd.recall == rev.recall);
    CHECK(fwd.f1 == rev.f1);

    CHECK_THROWS_WITH_AS(
        retrieval::evaluate(std::vector<retrieval::QueryPrediction>{{"ghost", S({"a"})}}, gold3),
        doctest::Contains("no gold label for case 'ghost'"), Error);
    std::vector<corpus::GoldLabel> empty_gold{{"q1", {}}};
    CHECK_THROWS_WITH_AS(
        retrieval::evaluate(std::vector<retrieval::QueryPrediction>{{"q1", S({"a"})}}, empty_gold),
        doctest::Contains("empty gold set"), Error);
}

TEST_CASE("evaluate agrees with an independent rational oracle on random sets") {
    std::mt19937 rng(313);
    for (int iter = 0; iter < 30; ++iter) {
        std::vector<corpus::GoldLabel> gold;
        std::vector<retrieval::QueryPrediction> pred;
        std::vector<std::pair<std::set<std::string>, std::set<std::string>>> pairs;
        int n = 1 + static_cast<int>(rng() % 8);
        for (int i = 0; i < n; ++i) {
            std::set<std::string> g, p;
            int gn = 1 + static_cast<int>(rng() % 4);
            int pn = static_cast<int>(rng() % 5);
            for (int k = 0; k < gn; ++k) g.insert("law-" + std::to_string(rng() % 9));
            for (int k = 0; k < pn; ++k) p.insert("law-" + std::to_string(rng() % 9));
            gold.push_back({"q" + std::to_string(i), g});
            pred.push_back({"q" + std::to_string(i), p});
            pairs.emplace_back(p, g);
        }
        auto got = retrieval::evaluate(pred, gold);
        auto expected = oracle::prf(pairs);
        CHECK(got.precision == static_cast<double>(expected.precision));
        CHECK(got.recall == static_cast<double>(expected.recall));
        CHECK(got.f1 == static_cast<double>(expected.f1));
    }
}

TEST_CASE("select_holdout is deterministic and bounded") {
    auto data = corpus::generate_corpus(81, {.cases = 40, .laws = 10, .courts = 4, .domains = 3});
    auto a = retrieval::select_holdout(data.cases, 10, 99);
    auto b = retrieval::select_holdout(data.cases, 10, 99);
    CHECK(a == b);
    CHECK(a.size() == 10);
    CHECK(std::is_sorted(a.begin(), a.end()));
    auto c = retrieval::select_holdout(data.cases, 10, 100);
    CHECK(a != c);
    CHECK_THROWS_WITH_AS(retrieval::select_holdout(data.cases, 40, 1), doctest::Contains("holdout size"),
                         Error);
}

TEST_CASE("run_all executes the 11 runs with holdout integrity") {
    corpus::GeneratorParams gen{.cases = 120, .laws = 40, .courts = 8, .domains = 5};
    auto data = corpus::generate_corpus(91, gen);
    auto test_ids = retrieval::select_holdout(data.cases, 30, 7);
    retrieval::RunOptions options;
    auto outcome = retrieval::run_all(data.cases, data.laws, data.gold, test_ids, options);

    REQUIRE(outcome.results.size() == 11);
    for (int i = 0; i < 11; ++i) {
        CHECK(outcome.results[static_cast<std::size_t>(i)].spec.run == i + 1);
        CHECK(outcome.results[static_cast<std::size_t>(i)].predictions.size() == 30);
    }

    // No test case leaks into the graph or the index.
    std::set<std::string> node_ids(outcome.graph_node_ids.begin(), outcome.graph_node_ids.end());
    std::set<std::string> doc_ids(outcome.index_doc_ids.begin(), outcome.index_doc_ids.end());
    for (const auto& id : test_ids) {
        CHECK(node_ids.count(id) == 0);
        CHECK(doc_ids.count(id) == 0);
    }

    // Per query: intersection ⊆ union for runs (7,8) and (10,11); run 6 sits
    // between run 8 and run 7; method-4 predictions are method-3 predictions
    // over a restricted candidate pool.
    auto per_query = [&](int run) {
        std::map<std::string, std::set<std::string>> out;
        for (const auto& p : outcome.results[static_cast<std::size_t>(run - 1)].predictions) {
            out[p.case_id] = p.predicted_laws;
        }
        return out;
    };
    auto subset = [](const std::set<std::string>& a, const std::set<std::string>& b) {
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
    };
    auto run6 = per_query(6), run7 = per_query(7), run8 = per_query(8);
    auto run10 = per_query(10), run11 = per_query(11);
    for (const auto& id : test_ids) {
        CHECK(subset(run8.at(id), run7.at(id)));
        CHECK(subset(run11.at(id), run10.at(id)));
        CHECK(subset(run8.at(id), run6.at(id)));
        CHECK(subset(run6.at(id), run7.at(id)));
    }

    // Recall ordering union >= intersection is then a theorem.
    CHECK(outcome.results[6].metrics.recall >= outcome.results[7].metrics.recall);
    CHECK(outcome.results[9].metrics.recall >= outcome.results[10].metrics.recall);

    // Determinism of the whole harness.
    auto again = retrieval::run_all(data.cases, data.laws, data.gold, test_ids, options);
    for (std::size_t r = 0; r < 11; ++r) {
        CHECK(again.results[r].metrics.f1 == outcome.results[r].metrics.f1);
        CHECK(again.results[r].metrics.recall == outcome.results[r].metrics.recall);
        CHECK(again.results[r].metrics.precision == outcome.results[r].metrics.precision);
        for (std::size_t q = 0; q < again.results[r].predictions.size(); ++q) {
            CHECK(again.results[r].predictions[q].predicted_laws ==
                  outcome.results[r].predictions[q].predicted_laws);
        }
    }
}

TEST_CASE("run_all accepts an explicit graph subset") {
    auto data = corpus::generate_corpus(95, {.cases = 60, .laws = 20, .courts = 5, .domains = 3});
    std::vector<std::string> test_ids{data.cases[0].case_id, data.cases[1].case_id};
    std::vector<std::string> graph_ids;
    for (std::size_t i = 10; i < 40; ++i) graph_ids.push_back(data.cases[i].case_id);
    auto outcome = retrieval::run_all(data.cases, data.laws, data.gold, test_ids, {},
                                      std::span<const std::string>(graph_ids));
    CHECK(outcome.graph_case_ids == graph_ids);
    CHECK(outcome.index_doc_ids.size() == graph_ids.size());
    REQUIRE(outcome.results.size() == 11);
    for (const auto& r : outcome.results) CHECK(r.predictions.size() == 2);
}

TEST_CASE("run_all rejects bad holdout configurations") {
    auto data = corpus::generate_corpus(92, {.cases = 20, .laws = 10, .courts = 3, .domains = 2});
    retrieval::RunOptions options;

    std::vector<std::string> unknown{"case-99999"};
    CHECK_THROWS_WITH_AS(retrieval::run_all(data.cases, data.laws, data.gold, unknown, options),
                         doctest::Contains("not in the corpus"), Error);

    std::vector<std::string> test{"case-00001"};
    std::vector<std::string> overlapping{"case-00001", "case-00002"};
    CHECK_THROWS_WITH_AS(
        retrieval::run_all(data.cases, data.laws, data.gold, test, options,
                           std::span<const std::string>(overlapping)),
        doctest::Contains("overlap at case 'case-00001'"), Error);

    std::vector<std::string> all_ids;
    for (const auto& rec : data.cases) all_ids.push_back(rec.case_id);
    CHECK_THROWS_WITH_AS(retrieval::run_all(data.cases, data.laws, data.gold, all_ids, options),
                         doctest::Contains("no cases to build"), Error);

    // Missing gold for a test case surfaces by name.
    std::vector<corpus::GoldLabel> partial(data.gold.begin() + 1, data.gold.end());
    std::vector<std::string> first{data.cases[0].case_id};
    CHECK_THROWS_WITH_AS(retrieval::run_all(data.cases, data.laws, partial, first, options),
                         doctest::Contains("no gold label"), Error);
}

TEST_CASE("result tables carry identical values in both formats") {
    auto data = corpus::generate_corpus(93, {.cases = 40, .laws = 15, .courts = 4, .domains = 3});
    auto test_ids = retrieval::select_holdout(data.cases, 8, 5);
    auto outcome = retrieval::run_all(data.cases, data.laws, data.gold, test_ids, {});

    auto rows = retrieval::results_to_json(outcome.results);
    REQUIRE(rows.size() == 11);
    std::string tsv = retrieval::results_to_tsv(outcome.results);

    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < tsv.size()) {
        std::size_t nl = tsv.find('\n', start);
        lines.push_back(tsv.substr(start, nl - start));
        start = nl + 1;
    }
    REQUIRE(lines.size() == 12); // header + 11 rows
    CHECK(lines[0] == "run\tmethod\tdescription\tf1\trecall\tprecision");
    for (std::size_t i = 0; i < 11; ++i) {
        const auto& row = rows[i];
        std::string expected = std::to_string(row["run"].get<int>()) + "\t" +
                               std::to_string(row["method"].get<int>()) + "\t" +
                               row["description"].get<std::string>() + "\t" +
                               nlohmann::ordered_json(row["f1"]).dump() + "\t" +
                               nlohmann::ordered_json(row["recall"]).dump() + "\t" +
                               nlohmann::ordered_json(row["precision"]).dump();
        CHECK(lines[i + 1] == expected);
    }
}

TEST_SUITE_END();
