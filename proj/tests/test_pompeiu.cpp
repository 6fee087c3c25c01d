#include <doctest.h>

#include "confgruss/corpus.hpp"
#include "confgruss/error.hpp"
#include "confgruss/pompeiu.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace confgruss;

TEST_SUITE("pompeiu") {

TEST_CASE("quotient examples") {
    for (double alpha : {0.3, 0.5, 1.0})
        CHECK(pompeiu_quotient(parse_expr("2.5"), 1.2, 3.1, alpha) == doctest::Approx(alpha * 2.5).epsilon(1e-14));
    CHECK(std::abs(pompeiu_quotient(parse_expr("sqrt(x)"), 2.0, 3.0, 0.5)) <= 1e-15);
    CHECK(pompeiu_quotient(parse_expr("x"), 1.0, 2.0, 1.0) == 0.0);
    CHECK(pompeiu_quotient(parse_expr("x^2"), 1.0, 2.0, 1.0) == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("quotient is symmetric and rejects bad points") {
    ExpressionFn f = parse_expr("exp(x)*sin(x)");
    for (double alpha : {0.25, 0.7, 1.0})
        CHECK(pompeiu_quotient(f, 0.8, 2.9, alpha) == pompeiu_quotient(f, 2.9, 0.8, alpha));
    CHECK_THROWS_AS(pompeiu_quotient(f, 1.0, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(pompeiu_quotient(f, 0.0, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(pompeiu_quotient(f, -1.0, 1.0, 0.5), DomainError);
}

TEST_CASE("phi examples") {
    for (double xi : {0.5, 1.0, 3.0}) CHECK(phi(parse_expr("4"), xi, 0.25) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(phi(parse_expr("x"), 1.7, 1.0) == 0.0);
    CHECK(phi(parse_expr("exp(x)"), 2.0, 1.0) ==
          doctest::Approx(-std::exp(2.0)).epsilon(1e-14));
    // t^α has φ ≡ 0 in the mean-value form, but not in the literal form
    CHECK(std::abs(phi(parse_expr("sqrt(x)"), 2.5, 0.5)) <= 1e-15);
    CHECK(phi(parse_expr("sqrt(x)"), 2.5, 0.5, PhiForm::PaperLiteral) ==
          doctest::Approx(0.5 * std::sqrt(2.5) - std::pow(2.5, 1.5) * 0.5).epsilon(1e-14));
    // the two forms agree at α = 1
    ExpressionFn g = parse_expr("log(x)*cos(x)");
    CHECK(phi(g, 1.9, 1.0) == phi(g, 1.9, 1.0, PhiForm::PaperLiteral));
}

TEST_CASE("mean value identity holds for the closed-form phi") {
    // Q = φ(ξ) for some ξ ∈ (x1, x2): for f = x^k, φ(ξ) = (α - k) ξ^k is monotone, so ξ is explicit.
    for (double alpha : {0.3, 0.5, 0.8, 1.0})
        for (double k : {2.0, 3.0, -1.0}) {
            ExpressionFn f = parse_expr("x^" + std::to_string(static_cast<int>(k)));
            double x1 = 1.0, x2 = 3.0;
            double q = pompeiu_quotient(f, x1, x2, alpha);
            double xi = std::pow(q / (alpha - k), 1.0 / k);
            INFO("alpha=", alpha, " k=", k);
            CHECK(xi > x1);
            CHECK(xi < x2);
            MeanValueResult r = find_xi(f, x1, x2, alpha, 1e-12);
            CHECK(r.status == XiStatus::Bracketed);
            CHECK(r.xi == doctest::Approx(xi).epsilon(1e-10));
            CHECK(r.residual <= 1e-12);
        }
}

TEST_CASE("find_xi examples") {
    MeanValueResult r = find_xi(parse_expr("3"), 1.0, 2.0, 0.5, 1e-10);
    CHECK(r.status == XiStatus::DegenerateConstantPhi);
    CHECK(r.residual <= 1e-10);
    CHECK(r.xi == 1.5);

    r = find_xi(parse_expr("exp(x)"), 1.0, 2.0, 1.0, 1e-10);
    CHECK(r.status == XiStatus::Bracketed);
    CHECK(r.residual <= 1e-10);
    CHECK(r.xi == doctest::Approx(1.455489451786119794).epsilon(1e-9));
    REQUIRE(r.bracket);
    CHECK(r.bracket->first <= r.xi);
    CHECK(r.xi <= r.bracket->second);

    r = find_xi(parse_expr("x^2"), 1.0, 2.0, 1.0, 1e-10);
    CHECK(r.xi == doctest::Approx(std::numbers::sqrt2).epsilon(1e-9));

    r = find_xi(parse_expr("x^2"), 1.0, 3.0, 0.5, 1e-12);
    CHECK(r.quotient == doctest::Approx(-4.964101615137754587).epsilon(1e-13));
    CHECK(r.xi == doctest::Approx(1.819175933426589463).epsilon(1e-10));

    CHECK_THROWS_AS(find_xi(parse_expr("x"), 2.0, 1.0, 0.5, 1e-10), ConfigError);
    CHECK_THROWS_AS(find_xi(parse_expr("x"), 1.0, 1.0, 0.5, 1e-10), ConfigError);
    CHECK_THROWS_AS(find_xi(parse_expr("x"), 1.0, 2.0, 0.5, 0.0), ConfigError);
}

TEST_CASE("literal phi fails the identity for alpha below one") {
    // f = √t at α = 0.5: Q = 0 while the literal φ stays away from zero.
    MeanValueResult lit = find_xi(parse_expr("sqrt(x)"), 2.0, 3.0, 0.5, 1e-10, {512, 200, PhiForm::PaperLiteral});
    CHECK(lit.status == XiStatus::ScanMin);
    CHECK(lit.residual > 0.5);
    MeanValueResult cor = find_xi(parse_expr("sqrt(x)"), 2.0, 3.0, 0.5, 1e-10);
    CHECK(cor.residual <= 1e-10);
}

TEST_CASE("returned point realizes the two-point identity on corpus draws") {
    CorpusConstraints c;
    std::mt19937_64 rng(77);
    int trials = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        ExpressionFn f = sample_function(seed, c);
        std::uniform_real_distribution<double> pt(c.a, c.b), al(0.05, 1.0);
        double x1 = pt(rng), x2 = pt(rng), alpha = al(rng);
        if (x1 == x2) continue;
        if (x2 < x1) std::swap(x1, x2);
        double q = pompeiu_quotient(f, x1, x2, alpha);
        double scale = std::max(1.0, std::abs(q));
        MeanValueResult r = find_xi(f, x1, x2, alpha, 1e-10 * scale);
        INFO(f.source_text(), " alpha=", alpha, " [", x1, ", ", x2, "]");
        CHECK(r.xi > x1);
        CHECK(r.xi < x2);
        CHECK(r.residual <= 1e-8 * scale);
        if (r.status == XiStatus::Bracketed) CHECK(r.residual <= 1e-10 * scale);
        double lhs = std::pow(x2, alpha) * f.value(x1) - std::pow(x1, alpha) * f.value(x2);
        double rhs = (std::pow(x2, alpha) - std::pow(x1, alpha)) / alpha * phi(f, r.xi, alpha);
        double dscale = std::max({1.0, std::abs(lhs), std::pow(x2, alpha) * std::abs(f.value(x1))});
        CHECK(std::abs(lhs - rhs) <= 1e-8 * dscale);
        ++trials;
    }
    CHECK(trials > 190);
}

TEST_CASE("status names") {
    CHECK(xi_status_name(XiStatus::Bracketed) == "bracketed");
    CHECK(xi_status_name(XiStatus::ScanMin) == "scan_min");
    CHECK(xi_status_name(XiStatus::DegenerateConstantPhi) == "degenerate_constant_phi");
}

}  // TEST_SUITE
