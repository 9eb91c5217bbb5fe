#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <unordered_set>
#include <vector>

#include "lawkg/corpus.hpp"
#include "lawkg/error.hpp"
#include "lawkg/text.hpp"
#include "rng.hpp"

namespace lawkg::corpus {

namespace {

using detail::Rng;

// Law-name building blocks. Topic words are kept disjoint from the citation
// cue words (luật, điều, khoản, điểm, bộ) and from the connective/filler
// vocabulary used in generated sentences, so a citation sentence can only
// cover the token set of the one law it names.
const std::vector<std::string>& single_topics() {
    static const std::vector<std::string> v = {
        "Đất đai", "Nhà ở", "Doanh nghiệp", "Đầu tư", "Xây dựng", "Thuế",
        "Hải quan", "Du lịch", "Báo chí", "Đấu thầu", "Kiểm toán", "Thống kê",
    };
    return v;
}

const std::vector<std::string>& pair_topics() {
    static const std::vector<std::string> v = {
        "Dân sự",     "Hình sự",    "Thương mại", "Lao động",   "Hành chính", "Môi trường",
        "Giáo dục",   "Y tế",       "Giao thông", "Tài chính",  "Ngân hàng",  "Bảo hiểm",
        "Nông nghiệp", "Thủy sản",  "Lâm nghiệp", "Khoáng sản", "Năng lượng", "Viễn thông",
        "Công nghệ",  "Điện lực",   "Cư trú",     "Quốc tịch",  "Hộ tịch",    "Công chứng",
        "Khí tượng",  "Đo đạc",     "Thể thao",   "Xuất bản",   "Chứng khoán", "Cạnh tranh",
        "Phá sản",    "Trọng tài",  "Tố tụng",    "Thi hành",   "Tổ chức",    "Thanh tra",
    };
    return v;
}

const std::vector<std::string>& provinces() {
    static const std::vector<std::string> v = {
        "Hà Nội",     "Hải Phòng",  "Đà Nẵng",    "Cần Thơ",    "Biên Hòa",  "Nha Trang",
        "Vũng Tàu",   "Quảng Ninh", "Nghệ An",    "Thanh Hóa",  "Bắc Giang", "Nam Định",
        "Thái Bình",  "Phú Thọ",    "Lào Cai",    "Sơn La",     "Gia Lai",   "Đắk Lắk",
        "Lâm Đồng",   "Bình Dương", "Đồng Nai",   "Long An",    "Tiền Giang", "Bến Tre",
        "Vĩnh Long",  "Đồng Tháp",  "An Giang",   "Kiên Giang", "Cà Mau",    "Bạc Liêu",
        "Sóc Trăng",  "Tây Ninh",   "Bình Phước", "Quảng Bình", "Quảng Trị", "Quảng Nam",
        "Quảng Ngãi", "Bình Định",  "Phú Yên",    "Ninh Thuận",
    };
    return v;
}

const std::vector<std::string>& place_syllables() {
    static const std::vector<std::string> v = {
        "Phú", "Lộc", "Thạnh", "Bình", "Minh", "Khánh", "Vĩnh", "Phước", "Hòa", "Tân",
        "Long", "Mỹ", "An", "Thuận", "Hải", "Sơn", "Trà", "Kim", "Lam", "Xuân",
    };
    return v;
}

const std::vector<std::string>& base_domains() {
    static const std::vector<std::string> v = {
        "Hình sự",   "Dân sự",           "Hôn nhân gia đình", "Kinh doanh thương mại",
        "Lao động",  "Hành chính",       "Đất đai",           "Thừa kế",
        "Sở hữu trí tuệ", "Môi trường",  "Phá sản",           "Bảo hiểm xã hội",
        "Thuế",      "Xây dựng",         "Tín dụng",          "Vận tải",
    };
    return v;
}

const std::vector<std::string>& domain_codes() {
    static const std::vector<std::string> v = {
        "HS", "DS", "HNGD", "KDTM", "LD", "HC", "DD", "TK",
        "SHTT", "MT", "PS", "BHXH", "TH", "XD", "TD", "VT",
    };
    return v;
}

const std::vector<std::string>& surnames() {
    static const std::vector<std::string> v = {
        "Nguyễn", "Trần", "Lê", "Phạm", "Hoàng", "Vũ", "Đặng", "Bùi", "Đỗ", "Hồ", "Ngô", "Dương",
    };
    return v;
}

const std::vector<std::string>& middle_names() {
    static const std::vector<std::string> v = {"Văn", "Thị", "Minh", "Quốc", "Thu", "Đức", "Ngọc", "Thanh"};
    return v;
}

const std::vector<std::string>& given_names() {
    static const std::vector<std::string> v = {
        "Tuấn", "Hương", "Dung", "Nam", "Phong", "Linh", "Trang", "Cường", "Hạnh", "Quyên", "Đạt", "Nhung",
    };
    return v;
}

const std::vector<std::string>& subdomain_variants() {
    static const std::vector<std::string> v = {
        "", "Tranh chấp hợp đồng", "Tranh chấp bồi thường", "Tranh chấp quyền sở hữu",
    };
    return v;
}

// Narrative templates. Slot markers: {P} plaintiff, {D} defendant,
// {place} family place, {amount}/{amount2} money, {n} small number,
// {y} year, {m} month, {d} day.
//
// Sentences deliberately avoid the tokens "luật"/"khoản"/"điểm" and the
// phrases "quyết định" / "xét thấy" so that section segmentation and
// citation-cue detection only ever fire where intended ("điều kiện",
// "điều trị", "khoản tiết kiệm" appear as non-citation decoys).
const std::vector<std::vector<std::string>>& narrative_templates() {
    static const std::vector<std::vector<std::string>> v = {
        {
            "Ngày {d}/{m}/{y}, ông {P} và bà {D} ký kết hợp đồng chuyển nhượng quyền sử dụng thửa số {n} tại xã {place}.",
            "Giá chuyển nhượng hai bên thỏa thuận là {amount} đồng, đặt cọc trước {amount2} đồng.",
            "Đến hạn thanh toán, bà {D} không giao đủ số tiền còn lại như cam kết.",
            "Ông {P} nhiều lần yêu cầu tiếp tục thực hiện hợp đồng nhưng không có kết quả.",
            "Hai bên đã được chính quyền xã {place} hòa giải nhưng không thành.",
            "Nguyên đơn khởi kiện đề nghị buộc bị đơn hoàn trả tiền cọc và bồi thường thiệt hại.",
        },
        {
            "Theo giấy vay ngày {d}/{m}/{y}, bà {D} vay của ông {P} số tiền {amount} đồng với lãi suất thỏa thuận.",
            "Thời hạn vay là {n} tháng, tiền lãi trả định kỳ hằng tháng.",
            "Bà {D} mới trả được {amount2} đồng rồi ngừng thanh toán.",
            "Ông {P} đã gửi văn bản đòi nợ nhiều lần nhưng bị đơn né tránh.",
            "Tại xã {place}, hai bên lập biên bản đối chiếu công nợ xác nhận số dư.",
            "Nguyên đơn yêu cầu thanh toán nợ gốc và lãi chậm trả theo quy định.",
        },
        {
            "Ông {P} làm việc tại xưởng sản xuất của bà {D} ở {place} từ năm {y}.",
            "Hai bên giao kết hợp đồng lao động thời hạn {n} năm, mức lương {amount} đồng mỗi tháng.",
            "Ngày {d}/{m}, người sử dụng lao động ra thông báo chấm dứt hợp đồng trước thời hạn.",
            "Ông {P} cho rằng việc chấm dứt không đủ điều kiện và chưa được trả đủ trợ cấp.",
            "Đại diện người lao động tại {place} đã tổ chức đối thoại nhưng hai bên không thống nhất.",
            "Nguyên đơn khởi kiện đòi tiền lương còn thiếu và trợ cấp thôi việc.",
        },
        {
            "Ông {P} và bà {D} kết hôn năm {y}, đăng ký tại xã {place}.",
            "Quá trình chung sống phát sinh mâu thuẫn kéo dài, hai bên đã ly thân từ tháng {m}.",
            "Hai người có {n2} con chung, hiện các cháu đang sống cùng mẹ.",
            "Tài sản chung gồm một căn nhà tại {place} và khoản tiết kiệm {amount} đồng.",
            "Việc hòa giải đoàn tụ tại cơ sở không đạt kết quả.",
            "Nguyên đơn xin được nuôi con và chia tài sản chung theo thỏa thuận.",
        },
        {
            "Cụ {P} mất năm {y} không để lại di chúc, khối di sản gồm thửa vườn tại {place}.",
            "Các đồng thừa kế đã họp gia tộc nhưng không thống nhất được cách phân chia.",
            "Bà {D} đang trực tiếp quản lý di sản và không đồng ý chia.",
            "Giá trị khối di sản được định giá sơ bộ {amount} đồng.",
            "Chính quyền xã {place} xác nhận nguồn gốc đất do cha ông để lại.",
            "Nguyên đơn yêu cầu chia di sản thừa kế theo hàng thừa kế thứ nhất.",
        },
        {
            "Ngày {d}/{m}/{y}, xe tải do bà {D} điều khiển va chạm với xe máy của ông {P} tại ngã ba {place}.",
            "Vụ va chạm làm ông {P} bị thương phải điều trị {n} tuần tại bệnh viện.",
            "Chi phí chữa trị và sửa chữa phương tiện tổng cộng {amount} đồng.",
            "Hai bên thương lượng mức bồi thường nhưng không đạt thỏa thuận.",
            "Biên bản hiện trường được lập tại {place} với sự chứng kiến của người dân.",
            "Nguyên đơn khởi kiện yêu cầu bồi thường toàn bộ thiệt hại thực tế.",
        },
    };
    return v;
}

const std::vector<std::string>& judgment_fillers() {
    static const std::vector<std::string> v = {
        "Tại phiên tòa, nguyên đơn giữ nguyên yêu cầu khởi kiện.",
        "Bị đơn thừa nhận một phần sự việc nhưng đề nghị xem xét hoàn cảnh khó khăn.",
        "Lời khai của các bên phù hợp với tài liệu, chứng cứ có trong hồ sơ.",
        "Hội đồng xét xử đánh giá yêu cầu của nguyên đơn là có cơ sở một phần.",
        "Người làm chứng xác nhận sự việc xảy ra tại {place} đúng như trình bày.",
    };
    return v;
}

struct LawSpec {
    corpus::LawEntry entry;
    std::string citation_name; // name without the year suffix
};

std::string format_int(std::int64_t v) { return std::to_string(v); }

std::string make_amount(Rng& rng) {
    // e.g. "120.000.000" -- digit groups separated by dots, Vietnamese style.
    return format_int(rng.range(10, 999)) + ".000.000";
}

std::string replace_all(std::string s, std::string_view needle, std::string_view value) {
    std::size_t pos = 0;
    while ((pos = s.find(needle, pos)) != std::string::npos) {
        s.replace(pos, needle.size(), value);
        pos += value.size();
    }
    return s;
}

bool is_subset(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    // both sorted unique
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<std::string> law_token_set(const std::string& name) {
    auto tokens = text::tokenize(name);
    std::erase_if(tokens, [](const std::string& t) { return text::is_year_token(t); });
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    return tokens;
}

std::vector<LawSpec> make_laws(Rng& rng, int count) {
    std::vector<std::string> candidates;
    for (const auto& t : single_topics()) candidates.push_back(t);
    const auto& pairs = pair_topics();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        for (std::size_t j = i + 1; j < pairs.size(); ++j) {
            candidates.push_back(pairs[i] + " " + pairs[j]);
        }
    }
    rng.shuffle(candidates);

    std::vector<LawSpec> laws;
    std::vector<std::vector<std::string>> accepted_tokens;
    for (const auto& cand : candidates) {
        if (static_cast<int>(laws.size()) >= count) break;
        std::string prefix = rng.chance(0.2) ? "Bộ luật " : "Luật ";
        std::string base_name = prefix + cand;
        std::vector<std::string> tokens = law_token_set(base_name);
        bool clash = false;
        for (const auto& other : accepted_tokens) {
            if (is_subset(tokens, other) || is_subset(other, tokens)) {
                clash = true;
                break;
            }
        }
        if (clash) continue;

        LawSpec spec;
        spec.citation_name = base_name;
        char id[16];
        std::snprintf(id, sizeof(id), "law-%04d", static_cast<int>(laws.size()) + 1);
        spec.entry.law_id = id;
        if (rng.chance(0.85)) {
            int year = rng.range(1995, 2023);
            spec.entry.law_name = base_name + " " + format_int(year);
            spec.entry.year = year;
            if (rng.chance(0.3)) spec.entry.aliases.push_back(base_name);
        } else {
            spec.entry.law_name = base_name;
        }
        accepted_tokens.push_back(std::move(tokens));
        laws.push_back(std::move(spec));
    }
    if (static_cast<int>(laws.size()) < count) {
        throw Error("cannot generate " + std::to_string(count) + " distinct law names (bank supports ~" +
                    std::to_string(candidates.size()) + ")");
    }
    return laws;
}

std::vector<std::string> make_courts(Rng& rng, int count) {
    std::vector<std::string> courts;
    std::unordered_set<std::string> seen;
    int level_cursor = 0;
    int guard = 0;
    while (static_cast<int>(courts.size()) < count) {
        if (++guard > count * 200 + 1000) {
            throw Error("cannot generate " + std::to_string(count) + " distinct court names");
        }
        std::string name;
        switch (level_cursor++ % 7) {
            case 0:
                name = "Tòa án nhân dân tối cao";
                break;
            case 1:
                name = "Tòa án nhân dân cấp cao tại " +
                       std::vector<std::string>{"Hà Nội", "Đà Nẵng", "Thành phố Hồ Chí Minh"}[rng.index(3)];
                break;
            case 2:
                name = "Tòa án nhân dân tỉnh " + rng.pick(provinces());
                break;
            case 3:
                name = "Tòa án nhân dân thành phố " + rng.pick(provinces());
                break;
            case 4:
                name = "Tòa án nhân dân huyện " + rng.pick(place_syllables()) + " " + rng.pick(place_syllables());
                break;
            case 5:
                name = "Tòa án nhân dân quận " + rng.pick(place_syllables()) + " " + rng.pick(place_syllables());
                break;
            default:
                name = "Tòa án nhân dân thị xã " + rng.pick(place_syllables()) + " " + rng.pick(place_syllables());
                break;
        }
        if (seen.insert(name).second) courts.push_back(std::move(name));
    }
    return courts;
}

std::vector<std::string> make_domains(int count) {
    std::vector<std::string> domains;
    const auto& base = base_domains();
    for (int i = 0; i < count && i < static_cast<int>(base.size()); ++i) domains.push_back(base[i]);
    const auto& extra = pair_topics();
    for (int i = static_cast<int>(base.size()); i < count; ++i) {
        std::size_t idx = static_cast<std::size_t>(i - base.size());
        if (idx >= extra.size()) {
            throw Error("cannot generate " + std::to_string(count) + " distinct domain names");
        }
        domains.push_back("Tranh chấp " + extra[idx]);
    }
    return domains;
}

std::string make_person(Rng& rng) {
    return rng.pick(surnames()) + " " + rng.pick(middle_names()) + " " + rng.pick(given_names());
}

std::string fill_slots(std::string tpl, const std::string& plaintiff, const std::string& defendant,
                       const std::string& place, Rng& rng) {
    tpl = replace_all(std::move(tpl), "{P}", plaintiff);
    tpl = replace_all(std::move(tpl), "{D}", defendant);
    tpl = replace_all(std::move(tpl), "{place}", place);
    tpl = replace_all(std::move(tpl), "{amount}", make_amount(rng));
    tpl = replace_all(std::move(tpl), "{amount2}", make_amount(rng));
    tpl = replace_all(std::move(tpl), "{n2}", format_int(rng.range(1, 3)));
    tpl = replace_all(std::move(tpl), "{n}", format_int(rng.range(2, 24)));
    tpl = replace_all(std::move(tpl), "{y}", format_int(rng.range(2005, 2020)));
    tpl = replace_all(std::move(tpl), "{m}", format_int(rng.range(1, 12)));
    tpl = replace_all(std::move(tpl), "{d}", format_int(rng.range(1, 28)));
    return tpl;
}

/// Misspells every topic word of a law name so entity linking cannot reach
/// the score threshold for it (or for any other law). The "Luật"/"Bộ luật"
/// prefix and any year token are left alone.
std::string corrupt_law_name(const std::string& name) {
    std::string out;
    std::size_t start = 0;
    while (start <= name.size()) {
        std::size_t space = name.find(' ', start);
        std::string word = name.substr(start, space == std::string::npos ? std::string::npos : space - start);
        if (!out.empty()) out += ' ';
        out += word;
        if (word != "Luật" && word != "luật" && word != "Bộ" && !text::is_year_token(word)) out += 'x';
        if (space == std::string::npos) break;
        start = space + 1;
    }
    return out;
}

/// "Điều N của <name>" style citation clause, e.g.
/// "khoản 2 Điều 81 của Luật Dân sự Lao động 2014".
std::string citation_clause(Rng& rng, const std::string& law_name, bool corrupt) {
    std::string name = corrupt ? corrupt_law_name(law_name) : law_name;
    int article = rng.range(1, 220);
    switch (rng.index(3)) {
        case 0:
            return "Điều " + format_int(article) + " của " + name;
        case 1:
            return "khoản " + format_int(rng.range(1, 4)) + " Điều " + format_int(article) + " của " + name;
        default: {
            const char* letters[] = {"a", "b", "c", "d"};
            return std::string("điểm ") + letters[rng.index(4)] + " khoản " + format_int(rng.range(1, 3)) +
                   " Điều " + format_int(article) + " của " + name;
        }
    }
}

struct Family {
    std::size_t domain_idx = 0;
    std::size_t template_idx = 0;
    std::string place;
    std::string subdomain;
    std::vector<std::size_t> law_indices; // indices into laws
};

} // namespace

SyntheticCorpus generate_corpus(std::uint64_t seed, const GeneratorParams& params) {
    if (params.cases < 0) throw Error("cases must be >= 0");
    if (params.cases > 0) {
        if (params.laws <= 0) throw Error("laws must be > 0");
        if (params.domains <= 0) throw Error("domains must be > 0");
        if (params.courts <= 0) throw Error("courts must be > 0");
    }
    if (params.laws < 0 || params.domains < 0 || params.courts < 0) {
        throw Error("counts must be >= 0");
    }
    if (params.noise < 0 || params.noise > 1) throw Error("noise must be in [0, 1]");
    if (params.family_size < 1) throw Error("family_size must be >= 1");
    if (params.mean_citations < 0) throw Error("mean_citations must be >= 0");

    Rng rng(seed);
    SyntheticCorpus corpus;

    std::vector<LawSpec> laws = make_laws(rng, params.laws);
    for (const auto& spec : laws) corpus.laws.push_back(spec.entry);
    if (params.cases == 0) return corpus;

    std::vector<std::string> courts = make_courts(rng, params.courts);
    std::vector<std::string> domains = make_domains(params.domains);
    const auto& codes = domain_codes();

    int citations_floor = static_cast<int>(params.mean_citations);
    double citations_frac = params.mean_citations - citations_floor;

    std::size_t family_count =
        (static_cast<std::size_t>(params.cases) + params.family_size - 1) / params.family_size;
    std::vector<Family> families;
    families.reserve(family_count);
    for (std::size_t f = 0; f < family_count; ++f) {
        Family fam;
        fam.domain_idx = rng.index(domains.size());
        fam.template_idx = rng.index(narrative_templates().size());
        fam.place = rng.pick(place_syllables()) + " " + rng.pick(place_syllables());
        fam.subdomain = rng.pick(subdomain_variants());
        std::size_t cite_count = static_cast<std::size_t>(citations_floor);
        if (citations_frac > 0 && rng.chance(citations_frac)) ++cite_count;
        if (cite_count > laws.size()) cite_count = laws.size();
        fam.law_indices = rng.sample_indices(laws.size(), cite_count);
        families.push_back(std::move(fam));
    }

    for (int i = 0; i < params.cases; ++i) {
        const Family& fam = families[static_cast<std::size_t>(i) / params.family_size];
        CaseRecord rec;
        char id[24];
        std::snprintf(id, sizeof(id), "case-%05d", i + 1);
        rec.case_id = id;

        int year = rng.range(2016, 2023);
        int month = rng.range(1, 12);
        int day = rng.range(1, 28);
        char date[16];
        std::snprintf(date, sizeof(date), "%04d-%02d-%02d", year, month, day);
        rec.date = date;

        int level_draw = rng.range(0, 99);
        rec.case_level = level_draw < 70   ? CaseLevel::trial
                         : level_draw < 95 ? CaseLevel::appellate
                                           : CaseLevel::cassation_reopening;
        const char* suffix = rec.case_level == CaseLevel::trial       ? "ST"
                             : rec.case_level == CaseLevel::appellate ? "PT"
                                                                      : "GDT";
        rec.document_type = rng.chance(0.85) ? DocumentType::verdict : DocumentType::decision;
        rec.case_number = format_int(rng.range(1, 999)) + "/" + format_int(year) + "/" +
                          codes[fam.domain_idx % codes.size()] + "-" + suffix;

        rec.court_name = courts[rng.index(courts.size())];
        rec.domain_name = domains[fam.domain_idx];
        rec.subdomain = fam.subdomain;

        std::string plaintiff = make_person(rng);
        std::string defendant = make_person(rng);

        // Introduction: header lines the metadata-recovery path understands.
        std::string intro;
        intro += rec.court_name + "\n";
        intro += (rec.document_type == DocumentType::verdict ? "Bản án số: " : "Quyết định số: ") +
                 rec.case_number + "\n";
        intro += "Ngày tuyên án: " + rec.date + "\n";
        intro += "Về việc: " + rec.domain_name + "\n";
        if (!rec.subdomain.empty()) intro += "Quan hệ tranh chấp: " + rec.subdomain + "\n";
        intro += "Nguyên đơn: ông " + plaintiff + ", trú tại xã " + fam.place + ".\n";
        intro += "Bị đơn: bà " + defendant + ".\n";

        std::string content = "NỘI DUNG VỤ ÁN\n";
        for (const auto& tpl : narrative_templates()[fam.template_idx]) {
            content += fill_slots(tpl, plaintiff, defendant, fam.place, rng) + "\n";
        }

        // Judgment cites in the undated Table-style form; the decision part
        // embeds the full corpus name verbatim, so at noise=0 every gold
        // law name appears literally in the decision section.
        std::string judgment = "NHẬN ĐỊNH CỦA TÒA ÁN\n";
        judgment += fill_slots(rng.pick(judgment_fillers()), plaintiff, defendant, fam.place, rng) + "\n";
        for (std::size_t law_idx : fam.law_indices) {
            if (!rng.chance(0.5)) continue;
            bool corrupt = params.noise > 0 && rng.chance(params.noise);
            judgment += "Đối chiếu " + citation_clause(rng, laws[law_idx].citation_name, corrupt) +
                        " thì yêu cầu nêu trên là có cơ sở.\n";
        }
        judgment += fill_slots(rng.pick(judgment_fillers()), plaintiff, defendant, fam.place, rng) + "\n";

        std::string decision = "QUYẾT ĐỊNH\n";
        for (std::size_t law_idx : fam.law_indices) {
            bool corrupt = params.noise > 0 && rng.chance(params.noise);
            decision += "Căn cứ " + citation_clause(rng, laws[law_idx].entry.law_name, corrupt) + ";\n";
        }
        decision += "Tuyên xử: chấp nhận một phần yêu cầu khởi kiện của nguyên đơn.\n";
        decision += "Buộc bị đơn thanh toán số tiền " + make_amount(rng) + " đồng trong thời hạn " +
                    format_int(rng.range(15, 90)) + " ngày.\n";
        decision += "Án phí sơ thẩm do các đương sự chịu theo quy định hiện hành.\n";

        rec.sections = SectionSet{intro, content, judgment, decision};
        rec.raw_text = rec.sections.joined();

        GoldLabel label;
        label.case_id = rec.case_id;
        for (std::size_t law_idx : fam.law_indices) label.gold_laws.insert(laws[law_idx].entry.law_id);
        corpus.gold.push_back(std::move(label));
        corpus.cases.push_back(std::move(rec));
    }
    return corpus;
}

} // namespace lawkg::corpus
