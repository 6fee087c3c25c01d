#include "confgruss/conformable.hpp"

#include "confgruss/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace confgruss {

void validate_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw ConfigError("alpha must lie in (0, 1], got " + std::to_string(alpha));
}

AlphaInterval::AlphaInterval(double alpha, double a, double b) : alpha_(alpha), a_(a), b_(b) {
    validate_alpha(alpha);
    if (!(a > 0.0 && a < b && std::isfinite(b)))
        throw ConfigError("interval must satisfy 0 < a < b, got [" + std::to_string(a) + ", " +
                          std::to_string(b) + "]");
}

double AlphaInterval::power_gap(int k) const {
    return std::pow(b_, k * alpha_) - std::pow(a_, k * alpha_);
}

double AlphaInterval::moment(int k) const { return power_gap(k + 1) / ((k + 1) * alpha_); }

double AlphaInterval::weight(double x) const { return alpha_ == 1.0 ? 1.0 : std::pow(x, alpha_ - 1.0); }

double conf_deriv(const ExpressionFn& f, double t, double alpha) {
    validate_alpha(alpha);
    if (!(t > 0.0)) throw DomainError("conformable derivative needs t > 0");
    double d = f.deriv(t);
    return alpha == 1.0 ? d : std::pow(t, 1.0 - alpha) * d;
}

double conf_deriv_limit(const ExpressionFn& f, double t, double alpha, double eps) {
    validate_alpha(alpha);
    if (!(t > 0.0)) throw DomainError("conformable derivative needs t > 0");
    if (!(eps > 0.0)) throw DomainError("limit quotient: step underflow (eps must be positive)");
    double step = eps * std::pow(t, 1.0 - alpha);
    if (!(t + step > t) || !(t - step < t))
        throw DomainError("limit quotient: step underflow at t = " + std::to_string(t));
    return (f.value(t + step) - f.value(t - step)) / (2.0 * eps);
}

double default_limit_eps(double t) { return 1e-6 * std::max(1.0, t); }

QuadResult alpha_integral(const Integrand& f, const AlphaInterval& ctx, const QuadratureSpec& spec) {
    return integrate([&](double x) { return f(x) * ctx.weight(x); }, ctx.a(), ctx.b(), spec);
}

QuadResult alpha_integral(const ExpressionFn& f, const AlphaInterval& ctx,
                          const QuadratureSpec& spec) {
    return alpha_integral([&](double x) { return f.value(x); }, ctx, spec);
}

QuadResult alpha_integral_2d(const Integrand2D& f, const AlphaInterval& ctx,
                             const QuadratureSpec& spec) {
    return integrate_2d(
        [&](double x, double t) { return f(x, t) * ctx.weight(t) * ctx.weight(x); }, ctx.a(),
        ctx.b(), ctx.a(), ctx.b(), spec);
}

}  // namespace confgruss
