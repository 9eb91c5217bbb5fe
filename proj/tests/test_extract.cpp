#include <doctest.h>

#include "lawkg/corpus.hpp"
#include "lawkg/error.hpp"
#include "lawkg/extract.hpp"
#include "lawkg/text.hpp"
#include "support/temp.hpp"

using namespace lawkg;

namespace {

corpus::CaseRecord minimal_case(const std::string& id) {
    corpus::CaseRecord rec;
    rec.case_id = id;
    rec.sections.introduction = "x";
    return rec;
}

/// Law-corpus fixture for the reference extraction example.
std::vector<corpus::LawEntry> example_law_corpus() {
    return {
        {"law-1", "Luật Thi hành án dân sự sửa đổi 2014", 2014, {}},
        {"law-2", "Luật thi hành án dân sự 2008", 2008, {}},
        {"law-3", "Luật tổ chức Tòa án nhân dân 2014", 2014, {}},
        {"law-4", "Luật thi hành án hình sự 2010", 2010, {}},
        {"law-5", "Bộ luật Tố tụng dân sự 2004", 2004, {}},
        {"law-6", "Luật Hôn nhân và gia đình 2014", 2014, {}},
    };
}

} // namespace

TEST_SUITE_BEGIN("extract");

TEST_CASE("parse_case_number handles the documented shape") {
    auto parsed = extract::parse_case_number("577/2022/HC-PT");
    REQUIRE(parsed.has_value());
    CHECK(parsed->serial == 577);
    CHECK(parsed->year == 2022);
    CHECK(parsed->code == "HC-PT");

    CHECK(extract::parse_case_number("3/2019/DSST")->code == "DSST");
    CHECK_FALSE(extract::parse_case_number("577/22/HC-PT").has_value());
    CHECK_FALSE(extract::parse_case_number("x/2022/HC-PT").has_value());
    CHECK_FALSE(extract::parse_case_number("577/2022/HC-PT-GDT").has_value());
}

TEST_CASE("derive_court_level keyword rules") {
    CHECK(extract::derive_court_level("Tòa án nhân dân tối cao") == extract::CourtLevel::supreme);
    CHECK(extract::derive_court_level("Tòa án nhân dân cấp cao tại Đà Nẵng") == extract::CourtLevel::high);
    CHECK(extract::derive_court_level("Tòa án nhân dân TP Hà Nội") == extract::CourtLevel::provincial);
    CHECK(extract::derive_court_level("Tòa án nhân dân tỉnh Bình Dương") == extract::CourtLevel::provincial);
    CHECK(extract::derive_court_level("Tòa án nhân dân huyện Phú Lộc") == extract::CourtLevel::district);
    CHECK(extract::derive_court_level("Tòa án nhân dân quận 3") == extract::CourtLevel::district);
    CHECK(extract::derive_court_level("Tòa án quân sự trung ương") == extract::CourtLevel::unknown);
    CHECK(extract::derive_court_level("") == extract::CourtLevel::unknown);
}

TEST_CASE("extract_meta prefers metadata and derives the level") {
    corpus::CaseRecord rec = minimal_case("c1");
    rec.court_name = "Tòa án nhân dân TP Hà Nội";
    rec.domain_name = "Dân sự";
    rec.subdomain = "Tranh chấp hợp đồng";
    rec.case_number = "577/2022/HC-PT";
    rec.date = "2022-06-01";
    auto meta = extract::extract_meta(rec);
    CHECK(meta.court_name == "Tòa án nhân dân TP Hà Nội");
    CHECK(meta.court_level == extract::CourtLevel::provincial);
    CHECK(meta.domain_name == "Dân sự");
    CHECK(meta.subdomain == "Tranh chấp hợp đồng");
    REQUIRE(meta.case_number.has_value());
    CHECK(meta.case_number->serial == 577);
    CHECK(meta.date == "2022-06-01");
}

TEST_CASE("extract_meta recovers missing metadata from the introduction") {
    corpus::CaseRecord with_meta = minimal_case("m");
    with_meta.court_name = "Tòa án nhân dân tỉnh Quảng Nam";
    with_meta.domain_name = "Hôn nhân gia đình";
    with_meta.subdomain = "Tranh chấp nuôi con";
    with_meta.case_number = "41/2020/HNGD-ST";
    with_meta.date = "2020-11-02";

    corpus::CaseRecord bare = minimal_case("b");
    bare.sections.introduction =
        "Tòa án nhân dân tỉnh Quảng Nam\n"
        "Bản án số: 41/2020/HNGD-ST\n"
        "Ngày tuyên án: 2020-11-02\n"
        "Về việc: Hôn nhân gia đình\n"
        "Quan hệ tranh chấp: Tranh chấp nuôi con\n";

    auto meta = extract::extract_meta(with_meta);
    auto fallback = extract::extract_meta(bare);
    CHECK(fallback.court_name == meta.court_name);
    CHECK(fallback.court_level == meta.court_level);
    CHECK(fallback.domain_name == meta.domain_name);
    CHECK(fallback.subdomain == meta.subdomain);
    CHECK(fallback.case_number_raw == meta.case_number_raw);
    CHECK(fallback.date == meta.date);

    corpus::CaseRecord empty;
    empty.case_id = "none";
    empty.sections.content = "chỉ có nội dung";
    CHECK_THROWS_WITH_AS(extract::extract_meta(empty), doctest::Contains("no metadata source"), Error);

    // Partially present metadata keeps its fields and fills only the gaps.
    corpus::CaseRecord partial = minimal_case("p");
    partial.court_name = "Tòa án nhân dân huyện Phú Lộc";
    partial.sections.introduction = "Tòa án nhân dân tỉnh Quảng Nam\nNgày tuyên án: 2019-08-01\n";
    auto half = extract::extract_meta(partial);
    CHECK(half.court_name == "Tòa án nhân dân huyện Phú Lộc"); // metadata wins
    CHECK(half.court_level == extract::CourtLevel::district);
    CHECK(half.date == "2019-08-01"); // recovered from the introduction
}

TEST_CASE("extract_citation_sentences finds cue-bearing spans in order") {
    CHECK(extract::extract_citation_sentences("").empty());
    CHECK(extract::extract_citation_sentences("Hai bên hòa giải không thành.").empty());

    std::string text =
        "Nguyên đơn trình bày sự việc. Tòa đã xem xét Điều 19 của Luật Hôn nhân và Gia đình; "
        "các bên không phản đối.\nCăn cứ khoản 2 Điều 5 của Bộ luật Tố tụng dân sự.";
    auto sentences = extract::extract_citation_sentences(text);
    REQUIRE(sentences.size() == 2);
    CHECK(sentences[0] == "Tòa đã xem xét Điều 19 của Luật Hôn nhân và Gia đình");
    CHECK(sentences[1] == "Căn cứ khoản 2 Điều 5 của Bộ luật Tố tụng dân sự");

    // Duplicates are retained in order of appearance.
    auto dup = extract::extract_citation_sentences("Điều 3 của Luật X. Điều 3 của Luật X.");
    CHECK(dup.size() == 2);
}

TEST_CASE("citation cues need a number or clause letter next to them") {
    CHECK(extract::extract_citation_sentences("đặc điểm quan trọng của vụ việc").empty());
    CHECK(extract::extract_citation_sentences("không đủ điều kiện khởi kiện").empty());
    CHECK(extract::extract_citation_sentences("một khoản tiết kiệm lớn").empty());
    CHECK(extract::extract_citation_sentences("điểm danh buổi sáng").empty());

    CHECK(extract::extract_citation_sentences("theo điểm a khoản 1").size() == 1);
    CHECK(extract::extract_citation_sentences("theo Điều 7 thì").size() == 1);
    CHECK(extract::extract_citation_sentences("bộ luật nói trên").size() == 1);
}

TEST_CASE("match_law resolves the documented extraction example") {
    auto laws = example_law_corpus();
    extract::LawMatchConfig cfg;
    auto m = extract::match_law("Điều 19 của Luật Hôn nhân và Gia đình", laws, cfg);
    REQUIRE(m.has_value());
    CHECK(m->law_id == "law-6");
    CHECK(m->score == 1.0);

    auto m2 = extract::match_law("điều 6, 7, 7a và 9 của Luật Thi hành án dân sự", laws, cfg);
    REQUIRE(m2.has_value());
    CHECK(m2->law_id == "law-2"); // dated name, year stripped before scoring

    auto m3 = extract::match_law("điều 28, 35 và 273 của Bộ luật Tố tụng dân sự", laws, cfg);
    REQUIRE(m3.has_value());
    CHECK(m3->law_id == "law-5");
}

TEST_CASE("match_law scores by containment of the law token set") {
    std::vector<corpus::LawEntry> laws{
        {"a", "Luật Alpha Beta Gamma Delta", std::nullopt, {}},
        {"b", "Luật Omega", std::nullopt, {}},
    };
    extract::LawMatchConfig cfg;

    auto exact = extract::match_law("Luật Alpha Beta Gamma Delta", laws, cfg);
    REQUIRE(exact.has_value());
    CHECK(exact->score == 1.0);

    // 3 of 5 tokens = 0.6, right on the default threshold.
    auto at_threshold = extract::match_law("xem Luật Alpha Beta nhé", laws, cfg);
    REQUIRE(at_threshold.has_value());
    CHECK(at_threshold->law_id == "a");
    CHECK(at_threshold->score == doctest::Approx(0.6));

    CHECK_FALSE(extract::match_law("chỉ nói Alpha Beta thôi", laws, cfg).has_value()); // 2 of 5
    CHECK_FALSE(extract::match_law("hoàn toàn không liên quan", laws, cfg).has_value());
    CHECK_THROWS_AS(extract::match_law("x", {}, cfg), Error);
}

TEST_CASE("match_law tie-breaking") {
    std::vector<corpus::LawEntry> laws{
        {"old", "Luật Dân sự 2005", 2005, {}},
        {"new", "Luật Dân sự 2015", 2015, {}},
    };
    extract::LawMatchConfig cfg; // latest_year by default
    auto m = extract::match_law("theo Luật Dân sự", laws, cfg);
    REQUIRE(m.has_value());
    CHECK(m->law_id == "new");

    cfg.tie_break = extract::TieBreak::lexicographic;
    auto m2 = extract::match_law("theo Luật Dân sự", laws, cfg);
    REQUIRE(m2.has_value());
    CHECK(m2->law_id == "new"); // "new" < "old" lexicographically

    std::vector<corpus::LawEntry> laws2{
        {"b-id", "Luật Dân sự 2015", 2015, {}},
        {"a-id", "Luật Dân sự 2005", 2005, {}},
    };
    auto m3 = extract::match_law("theo Luật Dân sự", laws2, cfg);
    REQUIRE(m3.has_value());
    CHECK(m3->law_id == "a-id");
}

TEST_CASE("match_law aliases join the token set") {
    std::vector<corpus::LawEntry> laws{
        {"x", "Luật Giao thông Đường bộ 2008", 2008, {"Luật GTĐB"}},
    };
    extract::LawMatchConfig cfg;
    // The alias token gtđb counts toward |T(l)|, so a full-name citation
    // no longer reaches 1.0 but still clears the threshold.
    auto m = extract::match_law("căn cứ Luật Giao thông Đường bộ", laws, cfg);
    REQUIRE(m.has_value());
    CHECK(m->score == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("match score is invariant under input normalization") {
    auto laws = example_law_corpus();
    extract::LawMatchConfig cfg;
    std::string sentence = "Điều 19 của Luật HÔN NHÂN và Gia đình";
    auto direct = extract::match_law(sentence, laws, cfg);
    auto folded = extract::match_law(text::casefold(text::nfc(sentence)), laws, cfg);
    REQUIRE(direct.has_value());
    REQUIRE(folded.has_value());
    CHECK(direct->law_id == folded->law_id);
    CHECK(direct->score == folded->score);
}

TEST_CASE("extract_all unions citations across sections with set semantics") {
    auto laws = example_law_corpus();
    extract::LawMatcher matcher(laws, {});

    corpus::CaseRecord rec = minimal_case("c-multi");
    rec.court_name = "Tòa án nhân dân tỉnh Bến Tre";
    rec.domain_name = "Hôn nhân gia đình";
    rec.sections.content = "NỘI DUNG VỤ ÁN\nnhắc Điều 81 của Luật Hôn nhân và Gia đình.";
    rec.sections.judgment = "NHẬN ĐỊNH\nlại nhắc Điều 82 của Luật Hôn nhân và Gia đình;";
    rec.sections.decision = "QUYẾT ĐỊNH\nCăn cứ Điều 83 của Luật Hôn nhân và Gia đình;";
    auto out = extract::extract_all(rec, matcher);
    CHECK(out.cited_laws == std::set<std::string>{"law-6"});
    CHECK(out.citation_sentences.size() == 3);
    CHECK(out.court_level == extract::CourtLevel::provincial);

    // cited_laws is exactly the set of non-null sentence matches.
    std::set<std::string> from_sentences;
    for (const auto& cs : out.citation_sentences) {
        if (cs.law_id) from_sentences.insert(*cs.law_id);
        CHECK(cs.score >= 0.0);
        CHECK(cs.score <= 1.0);
    }
    CHECK(from_sentences == out.cited_laws);

    corpus::CaseRecord none = minimal_case("c-none");
    none.court_name = "Tòa án nhân dân tỉnh Cà Mau";
    none.domain_name = "Dân sự";
    none.sections.content = "không có trích dẫn nào ở đây";
    auto empty = extract::extract_all(none, matcher);
    CHECK(empty.cited_laws.empty());
    CHECK(empty.citation_sentences.empty());
    CHECK(empty.case_id == "c-none");
}

TEST_CASE("noise-free synthetic corpora extract exactly the gold citations") {
    auto data = corpus::generate_corpus(31, {.cases = 120, .laws = 60, .courts = 10, .domains = 8});
    extract::LawMatcher matcher(data.laws, {});
    REQUIRE(data.cases.size() == data.gold.size());
    for (std::size_t i = 0; i < data.cases.size(); ++i) {
        auto rec = extract::extract_all(data.cases[i], matcher);
        CHECK(rec.cited_laws == data.gold[i].gold_laws);
    }
}

TEST_CASE("noise degrades recall but never links foreign laws") {
    corpus::GeneratorParams params{.cases = 80, .laws = 40, .courts = 8, .domains = 6};
    params.noise = 0.6;
    auto data = corpus::generate_corpus(17, params);
    extract::LawMatcher matcher(data.laws, {});
    std::size_t missing = 0;
    for (std::size_t i = 0; i < data.cases.size(); ++i) {
        auto rec = extract::extract_all(data.cases[i], matcher);
        for (const auto& id : rec.cited_laws) {
            CHECK(data.gold[i].gold_laws.count(id) == 1); // precision stays exact
        }
        if (rec.cited_laws != data.gold[i].gold_laws) ++missing;
    }
    CHECK(missing > 0); // at 60% corruption some citations must drop out
}

TEST_CASE("extraction records round-trip through records.jsonl") {
    auto data = corpus::generate_corpus(41, {.cases = 25, .laws = 20, .courts = 5, .domains = 4});
    extract::LawMatcher matcher(data.laws, {});
    std::vector<extract::ExtractionRecord> records;
    for (const auto& rec : data.cases) records.push_back(extract::extract_all(rec, matcher));

    testutil::TempDir dir;
    auto path = dir.path() / "records.jsonl";
    extract::save_records(path, records);
    auto loaded = extract::load_records(path);
    REQUIRE(loaded.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(loaded[i].case_id == records[i].case_id);
        CHECK(loaded[i].cited_laws == records[i].cited_laws);
        CHECK(loaded[i].court_level == records[i].court_level);
        CHECK(loaded[i].citation_sentences == records[i].citation_sentences);
    }
}

TEST_SUITE_END();
