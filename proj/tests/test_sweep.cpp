#include <doctest.h>

#include "confgruss/error.hpp"
#include "confgruss/sweep.hpp"

#include <set>

using namespace confgruss;

namespace {

SweepConfig small_config() {
    SweepConfig c;
    c.alphas = {0.5, 1.0};
    c.intervals = {{1.0, 2.0}};
    c.functions = std::vector<FunctionPair>{{"x", "x^2"}, {"exp(x)", "sin(x)"}};
    c.variants = {Variant::Paper, Variant::Corrected, Variant::Safe};
    c.checks = {Check::Thm31};
    c.seed = 5;
    return c;
}

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("cardinality of a sweep") {
    std::vector<TrialRecord> records = run_sweep(small_config());
    REQUIRE(records.size() == 4);
    for (const auto& r : records) {
        CHECK(r.bounds.size() == 3);
        CHECK(r.identities.empty());
        CHECK(r.mvt.empty());
        CHECK_FALSE(r.error);
    }
    CHECK(sweep_exit_code(records) == kExitOk);
}

TEST_CASE("records come back in trial id order and are reproducible") {
    SweepConfig c = small_config();
    c.checks = {Check::Thm31, Check::Thm32, Check::IdentityK, Check::IdentityH, Check::Mvt};
    std::vector<TrialRecord> first = run_sweep(c), second = run_sweep(c);
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].trial_id == make_trial_id(5, i));
        CHECK(first[i].trial_id == second[i].trial_id);
        CHECK(first[i].bounds.size() == 6);
        CHECK(first[i].identities.size() == 2);
        REQUIRE(first[i].mvt.size() == 2);
        CHECK(first[i].mvt[0].x1 == second[i].mvt[0].x1);
        CHECK(first[i].mvt[1].result.xi == second[i].mvt[1].result.xi);
        for (std::size_t k = 0; k < first[i].bounds.size(); ++k) CHECK(first[i].bounds[k].rhs == second[i].bounds[k].rhs);
    }
}

TEST_CASE("trial ids and derived seeds") {
    CHECK(make_trial_id(42, 7) == "s42-t000007");
    CHECK(make_trial_id(0, 123456) == "s0-t123456");
    CHECK(derive_seed(1, 0) == derive_seed(1, 0));
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 1000; ++s) seen.insert(derive_seed(9, s));
    CHECK(seen.size() == 1000);
    CHECK(derive_seed(1, 2) != derive_seed(2, 1));
}

TEST_CASE("config validation names the field") {
    SweepConfig c = small_config();
    c.alphas = {0.5, 1.5};
    try {
        run_sweep(c);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("alphas[1]") != std::string::npos);
    }
    c = small_config();
    c.intervals = {{2.0, 1.0}};
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("intervals[0]"), ConfigError);
    c = small_config();
    c.intervals = {{0.0, 1.0}};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_config();
    c.checks.clear();
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("checks"), ConfigError);
    c = small_config();
    c.variants.clear();
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_config();
    c.functions = std::vector<FunctionPair>{{"x +", "1"}};
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("functions[0]"), ConfigError);
    c = small_config();
    c.tolerances.abs_tol = -1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    CHECK_NOTHROW(SweepConfig::desk_suite().validate());
    CHECK_THROWS_AS(check_from_name("thm33"), ConfigError);
    for (Check k : {Check::Thm31, Check::Thm32, Check::IdentityK, Check::IdentityH, Check::Mvt})
        CHECK(check_from_name(check_name(k)) == k);
}

TEST_CASE("desk suite shape") {
    SweepConfig d = SweepConfig::desk_suite();
    CHECK(d.alphas == std::vector<double>{0.25, 0.5, 0.75, 1.0});
    CHECK(d.intervals.size() == 4);
    REQUIRE(std::holds_alternative<CorpusDraw>(d.functions));
    CHECK(std::get<CorpusDraw>(d.functions).count == 25);
    CHECK(d.checks.size() == 5);
    CHECK(d.variants.size() == 3);
}

TEST_CASE("trial errors are captured and count as failures") {
    SweepConfig c = small_config();
    c.functions = std::vector<FunctionPair>{{"log(x - 1.5)", "x"}};
    std::vector<TrialRecord> records = run_sweep(c);
    REQUIRE(records.size() == 2);
    CHECK(records[0].error);
    CHECK(records[0].assertion_failed());
    CHECK(sweep_exit_code(records) == kExitAssertion);
}

TEST_CASE("non-convergence maps to exit code 2") {
    SweepConfig c = small_config();
    c.functions = std::vector<FunctionPair>{{"sin(exp(2*x))", "x"}};
    c.intervals = {{1.0, 3.0}};
    c.tolerances.abs_tol = 1e-14;
    c.tolerances.rel_tol = 1e-14;
    c.tolerances.max_subdivisions = 3;
    c.variants = {Variant::Paper};
    std::vector<TrialRecord> records = run_sweep(c);
    CHECK(records[0].nonconverged());
    CHECK_FALSE(records[0].assertion_failed());
    CHECK(sweep_exit_code(records) == kExitNonConvergence);
}

TEST_CASE("report-only violations never fail the run") {
    SweepConfig c = small_config();
    c.functions = std::vector<FunctionPair>{{"1", "1"}};
    c.checks = {Check::Thm32};
    std::vector<TrialRecord> records = run_sweep(c);
    bool paper_failed = false;
    for (const auto& r : records)
        for (const auto& b : r.bounds)
            if (b.variant == Variant::Paper && !b.holds) paper_failed = true;
    CHECK(paper_failed);
    CHECK(sweep_exit_code(records) == kExitOk);
}

TEST_CASE("fuzz search") {
    SweepConfig c = SweepConfig::desk_suite();
    c.variants = {Variant::Safe};
    c.checks = {Check::Thm31, Check::Thm32};
    CHECK_THROWS_AS(fuzz_search(1, 0, c), ConfigError);
    FuzzSummary a = fuzz_search(3, 100, c), b = fuzz_search(3, 100, c);
    CHECK(a.trials == 100);
    REQUIRE(a.margins.size() == 2);
    for (std::size_t i = 0; i < a.margins.size(); ++i) {
        CHECK(a.margins[i].min_margin == b.margins[i].min_margin);
        CHECK(a.margins[i].min_margin_trial == b.margins[i].min_margin_trial);
        CHECK(a.margins[i].evaluated == 100);
    }
    CHECK(a.safe_violations() == 0);
    CHECK(a.exit_code() == kExitOk);
    c.variants = {Variant::Paper};
    FuzzSummary p3 = fuzz_search(3, 50, c), p4 = fuzz_search(4, 50, c);
    CHECK(p3.margins[0].min_margin != p4.margins[0].min_margin);
}

TEST_CASE("fuzz lists replayable report-only violations") {
    SweepConfig c = SweepConfig::desk_suite();
    c.checks = {Check::Thm32};
    FuzzSummary s = fuzz_search(11, 60, c);
    long paper_false = 0;
    for (const auto& m : s.margins)
        if (m.variant == Variant::Paper) paper_false = m.holds_false;
    CHECK(paper_false > 0);
    long listed = 0;
    for (const auto& v : s.violations) {
        if (v.variant != Variant::Paper) continue;
        ++listed;
        CHECK(v.trial_id == make_trial_id(11, v.index));
        // replay the exact trial
        SweepConfig one = c;
        one.seed = 11;
        TrialRecord r = run_trial(one, v.index, v.f, v.g, v.alpha, v.a, v.b);
        bool found = false;
        for (const auto& b : r.bounds)
            if (b.variant == Variant::Paper && b.margin == v.margin) found = true;
        CHECK(found);
    }
    CHECK(listed == std::min<long>(paper_false, kMaxReportOnlyViolationsPerKind));
    CHECK(s.exit_code() == kExitOk);
}

}  // TEST_SUITE
