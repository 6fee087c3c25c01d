#pragma once

// Globally adaptive quadrature on [a,b] with interval bisection.
//
// Each panel is integrated once with the base rule and once as the sum of the
// rule on its two halves; the difference is the panel error estimate and the
// two-half sum is the panel value. The panel with the largest estimate is split
// until the total meets max(abs_tol, rel_tol*|value|) or the subdivision budget
// runs out. Panel estimates never drop below 50*eps*∫|f| (rounding floor).

#include <functional>
#include <string_view>
#include <vector>

namespace confgruss {

enum class BaseRule { GaussLegendre15, SimpsonComposite };

std::string_view base_rule_name(BaseRule rule);
BaseRule base_rule_from_name(std::string_view name);  // throws ConfigError

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 200;
    BaseRule base_rule = BaseRule::GaussLegendre15;

    void validate() const;  // throws ConfigError
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

using Integrand = std::function<double(double)>;
using Integrand2D = std::function<double(double x, double t)>;

/// ∫_a^b f(x) dx. Non-convergence is reported through `converged`, not thrown.
/// Exceptions raised by f propagate.
QuadResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec);

/// ∫ over [points.front(), points.back()], integrated piece by piece between
/// consecutive sorted points (kinks, known singular points). Each piece gets a
/// share of abs_tol proportional to its length.
QuadResult integrate_piecewise(const Integrand& f, const std::vector<double>& points,
                               const QuadratureSpec& spec);

/// ∫_a^b ∫_c^d F(x,t) dt dx as the 1-D rule applied to the 1-D rule
/// (tensor product). The inner integral at each outer node is itself adaptive.
QuadResult integrate_2d(const Integrand2D& f, double a, double b, double c, double d,
                        const QuadratureSpec& spec);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1,1] (Newton on P_n).
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre_15();

}  // namespace confgruss
