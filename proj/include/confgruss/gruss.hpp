#pragma once

// Grüss-type functionals K and H over the α-integral, the identities that tie
// them to double integrals of the two-point defect
//
//   Δ_f(x,t) = t^α f(x) - x^α f(t),
//
// and the three flavours of bound check:
//
//   paper      the original constants, taken literally (report only)
//   corrected  the same derivation redone with d_αt carried through (report only)
//   safe       provable from |Δ_f(x,t)| <= |t^α - x^α|/α * sup|φ_f| (asserted)

#include "confgruss/conformable.hpp"
#include "confgruss/expr.hpp"
#include "confgruss/pompeiu.hpp"
#include "confgruss/quadrature.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace confgruss {

/// A computed quantity with a propagated absolute error bound.
struct Estimate {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;

    static Estimate exact(double v) { return {v, 0.0, true}; }
    static Estimate from(const QuadResult& q) { return {q.value, q.error_estimate, q.converged}; }
};

Estimate operator+(const Estimate& l, const Estimate& r);
Estimate operator-(const Estimate& l, const Estimate& r);
Estimate operator*(const Estimate& l, const Estimate& r);
Estimate operator*(double c, const Estimate& e);

/// The five α-integrals the functionals are built from.
struct GrussMoments {
    Estimate int_f;   // ∫ f d_αx
    Estimate int_g;   // ∫ g d_αx
    Estimate int_fg;  // ∫ f g d_αx
    Estimate mom_f;   // ∫ x^α f d_αx
    Estimate mom_g;   // ∫ x^α g d_αx
};

GrussMoments compute_moments(const ExpressionFn& f, const ExpressionFn& g, const AlphaInterval& ctx,
                             const QuadratureSpec& spec);

/// K[f,g] = ∫fg d_αx - (∫f d_αx ∫x^α g d_αx + ∫g d_αx ∫x^α f d_αx) / (b^{2α} - a^{2α})
Estimate functional_K(const GrussMoments& m, const AlphaInterval& ctx);
Estimate functional_K(const ExpressionFn& f, const ExpressionFn& g, const AlphaInterval& ctx,
                      const QuadratureSpec& spec);

/// K with the 1/α on ∫fg restored: (1/α)∫fg d_αx - S/(b^{2α} - a^{2α}).
/// Equals ∫∫[Δ_f g(x) + Δ_g f(x)] d_αt d_αx / (b^{2α} - a^{2α}).
Estimate functional_K_corrected(const GrussMoments& m, const AlphaInterval& ctx);
Estimate functional_K_corrected(const ExpressionFn& f, const ExpressionFn& g,
                                const AlphaInterval& ctx, const QuadratureSpec& spec);

/// H[f,g] = 2∫fg d_αx - 2 (3α/(b^{3α} - a^{3α})) ∫x^α f d_αx ∫x^α g d_αx
Estimate functional_H(const GrussMoments& m, const AlphaInterval& ctx);
Estimate functional_H(const ExpressionFn& f, const ExpressionFn& g, const AlphaInterval& ctx,
                      const QuadratureSpec& spec);

struct SupOptions {
    int grid_points = 2001;
    int refine_count = 3;
    double arg_tol = 1e-10;
    PhiForm form = PhiForm::Corrected;
};

/// Lower estimate of P_f = sup_{ξ∈[a,b]} |φ_f(ξ)|.
struct SupNormResult {
    double value = 0.0;
    double arg = 0.0;
    int grid_points = 0;
    bool refined = false;     // golden-section search improved on the grid
    bool rerun_4x = false;    // refinement moved the value by > 1%; grid re-run at 4x
};

SupNormResult sup_phi(const ExpressionFn& f, const AlphaInterval& ctx, const SupOptions& options = {});

enum class KernelForm { Paper, Corrected };

/// Paper: 1/2^α - x/(a^α + b^α). Corrected: (1/α²)(1/2 - x^α/(a^α + b^α)).
double kernel_eval(double x, const AlphaInterval& ctx, KernelForm form);

/// m(x) = (1/α)∫|t^α - x^α| d_αt, in closed form.
double abs_moment_m(double x, const AlphaInterval& ctx);

/// C(α,a,b) = ∫∫((t^α - x^α)/α)² d_αt d_αx = (b^α - a^α)^4 / (6α^4).
double moment_C(const AlphaInterval& ctx);

/// The bracket of the original second-moment bound, taken literally.
double paper_bracket(const AlphaInterval& ctx);

enum class IdentityName { IdentityK, IdentityH, MomentCCrosscheck, KernelAlpha1Agreement };
std::string_view identity_name(IdentityName n);

struct IdentityTolerances {
    double rtol = 1e-6;
    double atol_scale = 1e-9;  // atol = atol_scale * max(1, magnitude of the summed terms)
};

struct IdentityReport {
    IdentityName name = IdentityName::IdentityK;
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_residual = 0.0;
    double rel_residual = 0.0;  // abs_residual / max(|lhs|, |rhs|, size of the cancelled terms)
    double atol = 0.0;
    double rtol = 0.0;
    double quad_error = 0.0;
    bool converged = true;
    bool pass = false;
};

/// ∫∫[Δ_f g(x) + Δ_g f(x)] (2-D quadrature) against (b^{2α}-a^{2α})/α ∫fg - S (1-D).
IdentityReport identity_K(const ExpressionFn& f, const ExpressionFn& g, const AlphaInterval& ctx,
                          const QuadratureSpec& spec, const IdentityTolerances& tol = {});

/// (b^{3α}-a^{3α})/(3α) H[f,g] against ∫∫Δ_f Δ_g (2-D quadrature).
IdentityReport identity_H(const ExpressionFn& f, const ExpressionFn& g, const AlphaInterval& ctx,
                          const QuadratureSpec& spec, const IdentityTolerances& tol = {});

/// Closed-form C against its 2-D quadrature.
IdentityReport moment_C_crosscheck(const AlphaInterval& ctx, const QuadratureSpec& spec,
                                   const IdentityTolerances& tol = {1e-7, 1e-12});

/// Paper and corrected kernels at α = 1 on [a,b]; reports the worst of 101 points.
IdentityReport kernel_alpha1_agreement(double a, double b);

enum class Theorem { Thm31, Thm32 };
enum class Variant { Paper, Corrected, Safe };
std::string_view theorem_name(Theorem t);
std::string_view variant_name(Variant v);
Variant variant_from_name(std::string_view name);  // throws ConfigError

struct BoundReport {
    Theorem theorem = Theorem::Thm31;
    Variant variant = Variant::Safe;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs
    bool holds = false;   // margin >= -2 quad_error
    double quad_error = 0.0;
    bool converged = true;
    std::vector<std::string> notes;
};

/// Shared ingredients of the bound checks for one (f, g, α, [a,b]).
struct CaseAnalysis {
    GrussMoments moments;
    SupNormResult sup_f, sup_g;              // corrected φ
    SupNormResult sup_f_paper, sup_g_paper;  // literal φ, for the paper variants
};

CaseAnalysis analyze_case(const ExpressionFn& f, const ExpressionFn& g, const AlphaInterval& ctx,
                          const QuadratureSpec& spec, const SupOptions& sup_options = {});

BoundReport bound_thm31(const ExpressionFn& f, const ExpressionFn& g, const AlphaInterval& ctx,
                        const QuadratureSpec& spec, Variant variant, const CaseAnalysis& analysis);
BoundReport bound_thm31(const ExpressionFn& f, const ExpressionFn& g, const AlphaInterval& ctx,
                        const QuadratureSpec& spec, Variant variant);

BoundReport bound_thm32(const ExpressionFn& f, const ExpressionFn& g, const AlphaInterval& ctx,
                        const QuadratureSpec& spec, Variant variant, const CaseAnalysis& analysis);
BoundReport bound_thm32(const ExpressionFn& f, const ExpressionFn& g, const AlphaInterval& ctx,
                        const QuadratureSpec& spec, Variant variant);

}  // namespace confgruss
