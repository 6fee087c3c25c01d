#include <doctest.h>

#include "confgruss/error.hpp"
#include "confgruss/report.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace confgruss;

namespace {

SweepConfig small_config() {
    SweepConfig c;
    c.alphas = {0.5, 1.0};
    c.intervals = {{1.0, 2.0}};
    c.functions = std::vector<FunctionPair>{{"x", "x^2"}, {"exp(x)", "sin(x)"}};
    c.variants = {Variant::Paper, Variant::Corrected, Variant::Safe};
    c.checks = {Check::Thm31};
    return c;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / (std::string("confgruss_test_") + name);
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("csv has one row per trial and variant") {
    SweepConfig c = small_config();
    std::vector<TrialRecord> records = run_sweep(c);
    std::ostringstream out;
    write_csv(out, records);
    std::string text = out.str();
    CHECK(count_lines(text) == 13);
    CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
    // 14 columns on every row
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        int commas = 0;
        for (char ch : line)
            if (ch == ',') ++commas;
        CHECK(commas == 13);
    }
}

TEST_CASE("csv numbers carry 17 significant digits") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
    CHECK(std::stod(format_double(2.0 / 7.0)) == 2.0 / 7.0);
}

TEST_CASE("json round-trip reproduces numbers bit-exactly") {
    SweepConfig c = small_config();
    c.checks = {Check::Thm31, Check::Thm32, Check::IdentityK, Check::IdentityH, Check::Mvt};
    std::vector<TrialRecord> records = run_sweep(c);
    auto path = temp_file("roundtrip.json");
    emit_report(c, records, ReportFormat::Json, path);
    std::ifstream in(path);
    Json parsed = Json::parse(in);
    std::vector<TrialRecord> back = records_from_report(parsed);
    REQUIRE(back.size() == records.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        const TrialRecord &x = records[i], &y = back[i];
        CHECK(x.trial_id == y.trial_id);
        CHECK(same_bits(x.alpha, y.alpha));
        REQUIRE(x.bounds.size() == y.bounds.size());
        for (std::size_t k = 0; k < x.bounds.size(); ++k) {
            CHECK(same_bits(x.bounds[k].lhs, y.bounds[k].lhs));
            CHECK(same_bits(x.bounds[k].rhs, y.bounds[k].rhs));
            CHECK(same_bits(x.bounds[k].margin, y.bounds[k].margin));
            CHECK(same_bits(x.bounds[k].quad_error, y.bounds[k].quad_error));
            CHECK(x.bounds[k].notes == y.bounds[k].notes);
        }
        REQUIRE(x.identities.size() == y.identities.size());
        for (std::size_t k = 0; k < x.identities.size(); ++k) {
            CHECK(same_bits(x.identities[k].lhs, y.identities[k].lhs));
            CHECK(same_bits(x.identities[k].rel_residual, y.identities[k].rel_residual));
        }
        REQUIRE(x.mvt.size() == y.mvt.size());
        for (std::size_t k = 0; k < x.mvt.size(); ++k) {
            CHECK(same_bits(x.mvt[k].result.xi, y.mvt[k].result.xi));
            CHECK(same_bits(x.mvt[k].result.residual, y.mvt[k].result.residual));
            CHECK(x.mvt[k].result.status == y.mvt[k].result.status);
        }
    }
    // re-serializing the parsed records gives the same document
    Json again = sweep_report_json(sweep_config_from_json(parsed["config"]), back);
    again.erase("timing");
    parsed.erase("timing");
    CHECK(again.dump() == parsed.dump());
    std::filesystem::remove(path);
}

TEST_CASE("report layout") {
    SweepConfig c = small_config();
    Json j = sweep_report_json(c, run_sweep(c));
    CHECK(j["library"]["name"] == "confgruss");
    CHECK(j["library"]["version"] == std::string(kLibraryVersion));
    CHECK(j["config"]["alphas"].size() == 2);
    CHECK(j["records"].size() == 4);
    CHECK(j.contains("timing"));
    for (const auto& r : j["records"]) CHECK_FALSE(r.contains("wall_time"));
}

TEST_CASE("emit errors") {
    SweepConfig c = small_config();
    CHECK_THROWS_AS(emit_report(c, {}, ReportFormat::Json, temp_file("empty.json")), ConfigError);
    std::vector<TrialRecord> records = run_sweep(c);
    CHECK_THROWS_AS(emit_report(c, records, ReportFormat::Csv, "/nonexistent-dir/x/report.csv"), std::runtime_error);
    CHECK(report_format_from_name("csv") == ReportFormat::Csv);
    CHECK_THROWS_AS(report_format_from_name("xml"), ConfigError);
}

TEST_CASE("config parsing") {
    Json j = Json::parse(R"({
        "alphas": [0.5],
        "intervals": [[1, 3]],
        "functions": {"seed": 9, "count": 3, "constraints": {"max_depth": 2, "allowed_ops": ["x", "+", "*", "sin"]}},
        "variants": ["safe"],
        "tolerances": {"abs_tol": 1e-9, "base_rule": "simpson_composite"},
        "checks": ["thm32", "mvt"],
        "seed": 17
    })");
    SweepConfig c = sweep_config_from_json(j);
    CHECK(c.alphas == std::vector<double>{0.5});
    CHECK(c.seed == 17);
    CHECK(c.tolerances.abs_tol == 1e-9);
    CHECK(c.tolerances.rel_tol == 1e-8);
    CHECK(c.tolerances.base_rule == BaseRule::SimpsonComposite);
    REQUIRE(std::holds_alternative<CorpusDraw>(c.functions));
    const auto& d = std::get<CorpusDraw>(c.functions);
    CHECK(d.count == 3);
    CHECK(d.constraints.a == 1.0);
    CHECK(d.constraints.b == 3.0);
    CHECK(d.constraints.max_depth == 2);
    CHECK_FALSE(d.constraints.allowed_ops.contains(Op::Exp));
    CHECK(c.has_check(Check::Mvt));
    CHECK_FALSE(c.has_check(Check::Thm31));
    // echo and parse again
    SweepConfig again = sweep_config_from_json(to_json(c));
    CHECK(to_json(again).dump() == to_json(c).dump());

    CHECK(sweep_config_from_json(Json::parse(R"({"variants": ["all"]})")).variants.size() == 3);
    CHECK_THROWS_WITH_AS(sweep_config_from_json(Json::parse(R"({"alphas": [1.5]})")), doctest::Contains("alphas"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(sweep_config_from_json(Json::parse(R"({"alphas": "half"})")), doctest::Contains("alphas"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(sweep_config_from_json(Json::parse(R"({"checks": ["thm99"]})")), doctest::Contains("checks"),
                         ConfigError);
    CHECK_THROWS_AS(sweep_config_from_json(Json::parse(R"({"intervals": [[1]]})")), ConfigError);
    CHECK_THROWS_AS(sweep_config_from_json(Json::parse("[1, 2]")), ConfigError);
    CHECK_THROWS_AS(load_sweep_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("fuzz report keeps timing separate") {
    SweepConfig c = SweepConfig::desk_suite();
    c.checks = {Check::Thm31};
    c.variants = {Variant::Safe};
    FuzzSummary s = fuzz_search(5, 10, c);
    Json j = fuzz_report_json(c, s);
    CHECK(j["summary"]["trials"] == 10);
    CHECK_FALSE(j["summary"].contains("wall_time"));
    CHECK(j["timing"].contains("wall_time"));
}

}  // TEST_SUITE
