#pragma once

// Conformable derivative D_α and the α-integral ∫ f d_αx = ∫ f(x) x^{α-1} dx.

#include "confgruss/expr.hpp"
#include "confgruss/quadrature.hpp"

namespace confgruss {

/// The order α together with the interval [a,b]; 0 < α <= 1 and 0 < a < b.
class AlphaInterval {
public:
    AlphaInterval(double alpha, double a, double b);  // throws ConfigError

    double alpha() const { return alpha_; }
    double a() const { return a_; }
    double b() const { return b_; }

    /// b^{kα} - a^{kα}
    double power_gap(int k) const;

    /// ∫_a^b x^{kα} d_αx = (b^{(k+1)α} - a^{(k+1)α}) / ((k+1)α)
    double moment(int k) const;

    double weight(double x) const;  // x^{α-1}

private:
    double alpha_, a_, b_;
};

void validate_alpha(double alpha);  // throws ConfigError unless 0 < alpha <= 1

/// t^{1-α} f'(t); exactly f'(t) at α = 1.
double conf_deriv(const ExpressionFn& f, double t, double alpha);

/// Symmetric limit quotient [f(t + ε t^{1-α}) - f(t - ε t^{1-α})] / (2ε).
/// Throws DomainError when ε <= 0 or the step vanishes at t.
double conf_deriv_limit(const ExpressionFn& f, double t, double alpha, double eps);

/// Default oracle step 1e-6 * max(1, t).
double default_limit_eps(double t);

QuadResult alpha_integral(const Integrand& f, const AlphaInterval& ctx, const QuadratureSpec& spec);
QuadResult alpha_integral(const ExpressionFn& f, const AlphaInterval& ctx,
                          const QuadratureSpec& spec);

/// ∫_a^b ∫_a^b F(x,t) d_αt d_αx.
QuadResult alpha_integral_2d(const Integrand2D& f, const AlphaInterval& ctx,
                             const QuadratureSpec& spec);

}  // namespace confgruss
