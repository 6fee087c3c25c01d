#include <doctest.h>

#include "confgruss/error.hpp"
#include "confgruss/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <functional>
#include <numbers>

using namespace confgruss;

namespace {

// Reference integral from GSL's QAGS, independent of the library's engine.
double gsl_reference(const std::function<double(double)>& f, double a, double b) {
    gsl_set_error_handler_off();
    gsl_integration_workspace* ws = gsl_integration_workspace_alloc(2000);
    gsl_function gf;
    gf.function = [](double x, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(x); };
    gf.params = const_cast<std::function<double(double)>*>(&f);
    double result = 0.0, err = 0.0;
    gsl_integration_qags(&gf, a, b, 0.0, 1e-12, 2000, ws, &result, &err);
    gsl_integration_workspace_free(ws);
    return result;
}

}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("Gauss-Legendre nodes integrate polynomials of degree 29 exactly") {
    const GaussRule& rule = gauss_legendre_15();
    REQUIRE(rule.nodes.size() == 15);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-15));
    for (int k = 0; k <= 29; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], k);
        double exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
        CHECK(s == doctest::Approx(exact).epsilon(1e-14));
    }
}

TEST_CASE("agreement with an independent adaptive integrator") {
    QuadratureSpec spec;
    struct Case {
        const char* name;
        std::function<double(double)> f;
        double a, b;
    };
    const Case cases[] = {
        {"exp", [](double x) { return std::exp(x); }, 0.0, 3.0},
        {"oscillatory", [](double x) { return std::sin(20.0 * x) * x; }, 0.5, 4.0},
        {"peak", [](double x) { return 1.0 / (1e-3 + (x - 1.3) * (x - 1.3)); }, 1.0, 2.0},
        {"weighted", [](double x) { return std::cos(x) * std::pow(x, -0.75); }, 0.1, 5.0},
        {"sqrt kink", [](double x) { return std::sqrt(std::abs(x - 1.0)); }, 0.5, 2.0},
    };
    for (const auto& c : cases) {
        QuadResult r = integrate(c.f, c.a, c.b, spec);
        double ref = gsl_reference(c.f, c.a, c.b);
        INFO(c.name);
        CHECK(r.converged);
        CHECK(std::abs(r.value - ref) <= std::max(spec.abs_tol, 1e-8 * std::abs(ref)));
        CHECK(std::abs(r.value - ref) <= 10.0 * r.error_estimate + 1e-14 * std::abs(ref));
    }
}

TEST_CASE("converged results meet the requested tolerance") {
    for (BaseRule rule : {BaseRule::GaussLegendre15, BaseRule::SimpsonComposite}) {
        QuadratureSpec spec;
        spec.base_rule = rule;
        spec.max_subdivisions = 2000;
        QuadResult r = integrate([](double x) { return std::log(x) * std::sin(x); }, 1.0, 7.0, spec);
        INFO(base_rule_name(rule));
        CHECK(r.converged);
        CHECK(r.error_estimate <= std::max(spec.abs_tol, spec.rel_tol * std::abs(r.value)));
        double ref = gsl_reference([](double x) { return std::log(x) * std::sin(x); }, 1.0, 7.0);
        CHECK(r.value == doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("non-convergence is reported, not thrown") {
    QuadratureSpec spec;
    spec.abs_tol = 1e-15;
    spec.rel_tol = 1e-15;
    spec.max_subdivisions = 2;
    QuadResult r = integrate([](double x) { return std::sin(std::exp(x)); }, 0.5, 5.0, spec);
    CHECK_FALSE(r.converged);
    CHECK(std::isfinite(r.value));
    CHECK(r.error_estimate > 0.0);
}

TEST_CASE("reversed limits negate") {
    QuadratureSpec spec;
    auto f = [](double x) { return x * x; };
    CHECK(integrate(f, 2.0, 0.0, spec).value == doctest::Approx(-8.0 / 3.0).epsilon(1e-14));
    CHECK(integrate(f, 1.0, 1.0, spec).value == 0.0);
}

TEST_CASE("piecewise integration splits at kinks") {
    QuadratureSpec spec;
    auto f = [](double x) { return std::abs(std::sin(10.0 * x)); };
    std::vector<double> pts{0.0};
    for (int k = 1; k * std::numbers::pi / 10.0 < 3.0; ++k) pts.push_back(k * std::numbers::pi / 10.0);
    pts.push_back(3.0);
    QuadResult r = integrate_piecewise(f, pts, spec);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(gsl_reference(f, 0.0, 3.0)).epsilon(1e-10));
    CHECK_THROWS_AS(integrate_piecewise(f, {1.0}, spec), ConfigError);
    CHECK_THROWS_AS(integrate_piecewise(f, {2.0, 1.0}, spec), ConfigError);
}

TEST_CASE("tensor-product 2-D integration") {
    QuadratureSpec spec;
    QuadResult r = integrate_2d([](double x, double t) { return (t - x) * (t - x); }, 1.0, 2.0, 1.0, 2.0, spec);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
    r = integrate_2d([](double x, double t) { return std::exp(x) * std::cos(t); }, 0.0, 1.0, 0.0, 2.0, spec);
    CHECK(r.value == doctest::Approx((std::exp(1.0) - 1.0) * std::sin(2.0)).epsilon(1e-12));
}

TEST_CASE("spec validation") {
    QuadratureSpec spec;
    spec.abs_tol = 0.0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec = {};
    spec.rel_tol = -1.0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec = {};
    spec.max_subdivisions = 0;
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, spec), ConfigError);
    CHECK(base_rule_from_name("simpson_composite") == BaseRule::SimpsonComposite);
    CHECK(base_rule_from_name(base_rule_name(BaseRule::GaussLegendre15)) == BaseRule::GaussLegendre15);
    CHECK_THROWS_AS(base_rule_from_name("trapezoid"), ConfigError);
}

}  // TEST_SUITE
