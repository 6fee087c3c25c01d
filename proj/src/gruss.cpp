#include "confgruss/gruss.hpp"

#include "confgruss/error.hpp"
#include "confgruss/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

namespace confgruss {

Estimate operator+(const Estimate& l, const Estimate& r) {
    return {l.value + r.value, l.error + r.error, l.converged && r.converged};
}

Estimate operator-(const Estimate& l, const Estimate& r) {
    return {l.value - r.value, l.error + r.error, l.converged && r.converged};
}

Estimate operator*(const Estimate& l, const Estimate& r) {
    return {l.value * r.value,
            std::abs(l.value) * r.error + std::abs(r.value) * l.error + l.error * r.error,
            l.converged && r.converged};
}

Estimate operator*(double c, const Estimate& e) {
    return {c * e.value, std::abs(c) * e.error, e.converged};
}

namespace {

// Relative to the larger side or to the size of the cancelled terms.
double rel_of(double abs_residual, double lhs, double rhs, double scale) {
    double denom = std::max({std::abs(lhs), std::abs(rhs), scale});
    return denom > 0.0 ? abs_residual / denom : 0.0;
}

IdentityReport make_identity(IdentityName name, double lhs, double rhs, double scale,
                             double quad_error, bool converged, const IdentityTolerances& tol) {
    IdentityReport r;
    r.name = name;
    r.lhs = lhs;
    r.rhs = rhs;
    r.abs_residual = std::abs(lhs - rhs);
    r.rel_residual = rel_of(r.abs_residual, lhs, rhs, scale);
    r.atol = tol.atol_scale * std::max(1.0, scale);
    r.rtol = tol.rtol;
    r.quad_error = quad_error;
    r.converged = converged;
    r.pass = r.abs_residual <= r.atol || r.rel_residual <= r.rtol;
    return r;
}

// Δ_f(x,t) = t^α f(x) - x^α f(t)
double defect(const ExpressionFn& f, double x, double t, double alpha) {
    return std::pow(t, alpha) * f.value(x) - std::pow(x, alpha) * f.value(t);
}

BoundReport finish(Theorem th, Variant v, const Estimate& lhs, const Estimate& rhs) {
    BoundReport r;
    r.theorem = th;
    r.variant = v;
    r.lhs = lhs.value;
    r.rhs = rhs.value;
    r.margin = rhs.value - lhs.value;
    r.quad_error = lhs.error + rhs.error;
    r.holds = r.margin >= -2.0 * r.quad_error;
    r.converged = lhs.converged && rhs.converged;
    if (!r.converged) r.notes.emplace_back("quadrature did not converge");
    return r;
}

void note_sup(BoundReport& r, const SupNormResult& s, const char* which) {
    if (s.rerun_4x)
        r.notes.push_back(std::string("sup_phi(") + which +
                          "): refinement moved the grid value by more than 1%; re-ran at 4x density");
}

// Sign changes of fn on a 2001-point grid over [a,b], bisected to machine precision.
void add_sign_changes(const ExpressionFn& fn, double a, double b, std::vector<double>& out) {
    constexpr int n = 2001;
    double prev_x = a, prev_v = fn.value(a);
    for (int i = 1; i < n; ++i) {
        double x = (i == n - 1) ? b : a + (b - a) * i / (n - 1);
        double v = fn.value(x);
        if ((prev_v < 0.0 && v > 0.0) || (prev_v > 0.0 && v < 0.0)) {
            double lo = prev_x, hi = x, vlo = prev_v;
            for (int k = 0; k < 200; ++k) {
                double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                double vm = fn.value(mid);
                if ((vm < 0.0) == (vlo < 0.0)) {
                    lo = mid;
                    vlo = vm;
                } else {
                    hi = mid;
                }
            }
            out.push_back(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_v = v;
    }
}

// Endpoints plus every interior point where one of the |·| factors has a kink.
std::vector<double> kink_points(const ExpressionFn& f, const ExpressionFn& g,
                                const AlphaInterval& ctx, std::optional<double> kernel_zero) {
    std::vector<double> pts{ctx.a(), ctx.b()};
    add_sign_changes(f, ctx.a(), ctx.b(), pts);
    add_sign_changes(g, ctx.a(), ctx.b(), pts);
    if (kernel_zero && *kernel_zero > ctx.a() && *kernel_zero < ctx.b()) pts.push_back(*kernel_zero);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

Estimate abs_value(Estimate e) {
    e.value = std::abs(e.value);
    return e;
}

}  // namespace

GrussMoments compute_moments(const ExpressionFn& f, const ExpressionFn& g, const AlphaInterval& ctx,
                             const QuadratureSpec& spec) {
    const double alpha = ctx.alpha();
    auto integral = [&](auto&& fn) { return Estimate::from(alpha_integral(fn, ctx, spec)); };
    GrussMoments m;
    m.int_f = integral([&](double x) { return f.value(x); });
    m.int_g = integral([&](double x) { return g.value(x); });
    m.int_fg = integral([&](double x) { return f.value(x) * g.value(x); });
    m.mom_f = integral([&](double x) { return std::pow(x, alpha) * f.value(x); });
    m.mom_g = integral([&](double x) { return std::pow(x, alpha) * g.value(x); });
    return m;
}

namespace {

Estimate bracket_sum(const GrussMoments& m) { return m.int_f * m.mom_g + m.int_g * m.mom_f; }

}  // namespace

Estimate functional_K(const GrussMoments& m, const AlphaInterval& ctx) {
    return m.int_fg - (1.0 / ctx.power_gap(2)) * bracket_sum(m);
}

Estimate functional_K(const ExpressionFn& f, const ExpressionFn& g, const AlphaInterval& ctx,
                      const QuadratureSpec& spec) {
    return functional_K(compute_moments(f, g, ctx, spec), ctx);
}

Estimate functional_K_corrected(const GrussMoments& m, const AlphaInterval& ctx) {
    return (1.0 / ctx.alpha()) * m.int_fg - (1.0 / ctx.power_gap(2)) * bracket_sum(m);
}

Estimate functional_K_corrected(const ExpressionFn& f, const ExpressionFn& g,
                                const AlphaInterval& ctx, const QuadratureSpec& spec) {
    return functional_K_corrected(compute_moments(f, g, ctx, spec), ctx);
}

Estimate functional_H(const GrussMoments& m, const AlphaInterval& ctx) {
    const double c = 3.0 * ctx.alpha() / ctx.power_gap(3);
    return 2.0 * m.int_fg - (2.0 * c) * (m.mom_f * m.mom_g);
}

Estimate functional_H(const ExpressionFn& f, const ExpressionFn& g, const AlphaInterval& ctx,
                      const QuadratureSpec& spec) {
    return functional_H(compute_moments(f, g, ctx, spec), ctx);
}

SupNormResult sup_phi(const ExpressionFn& f, const AlphaInterval& ctx, const SupOptions& options) {
    if (options.grid_points < 3) throw ConfigError("sup_phi: grid_points must be >= 3");
    const double a = ctx.a(), b = ctx.b(), alpha = ctx.alpha();
    auto abs_phi = [&](double x) { return std::abs(phi(f, x, alpha, options.form)); };

    auto run = [&](int n) {
        std::vector<double> xs(n), vals(n);
        const double h = (b - a) / (n - 1);
        for (int i = 0; i < n; ++i) {
            xs[i] = i + 1 == n ? b : a + i * h;
            vals[i] = abs_phi(xs[i]);
        }
        SupNormResult r;
        r.grid_points = n;
        int best = static_cast<int>(std::max_element(vals.begin(), vals.end()) - vals.begin());
        r.value = vals[best];
        r.arg = xs[best];

        std::vector<int> peaks;
        for (int i = 0; i < n; ++i) {
            bool left_ok = i == 0 || vals[i] >= vals[i - 1];
            bool right_ok = i + 1 == n || vals[i] >= vals[i + 1];
            if (left_ok && right_ok) peaks.push_back(i);
        }
        std::stable_sort(peaks.begin(), peaks.end(), [&](int l, int r) { return vals[l] > vals[r]; });
        if (static_cast<int>(peaks.size()) > options.refine_count) peaks.resize(options.refine_count);

        for (int i : peaks) {
            double lo = xs[std::max(i - 1, 0)], hi = xs[std::min(i + 1, n - 1)];
            SearchPoint p = golden_section_max(abs_phi, lo, hi, options.arg_tol);
            if (p.value > r.value) {
                r.value = p.value;
                r.arg = p.x;
                r.refined = true;
            }
        }
        return std::pair{r, vals[best]};
    };

    auto [result, grid_best] = run(options.grid_points);
    if (result.value - grid_best > 0.01 * grid_best) {
        auto [dense, dense_grid] = run(4 * (options.grid_points - 1) + 1);
        (void)dense_grid;
        if (dense.value > result.value) {
            dense.refined = true;
            result = dense;
        }
        result.rerun_4x = true;
    }
    return result;
}

double kernel_eval(double x, const AlphaInterval& ctx, KernelForm form) {
    const double alpha = ctx.alpha();
    const double sum = std::pow(ctx.a(), alpha) + std::pow(ctx.b(), alpha);
    if (form == KernelForm::Paper) return 1.0 / std::pow(2.0, alpha) - x / sum;
    return (0.5 - std::pow(x, alpha) / sum) / (alpha * alpha);
}

double abs_moment_m(double x, const AlphaInterval& ctx) {
    // With u = t^α the integral is (1/α²)∫|u - x^α| du over [a^α, b^α].
    const double alpha = ctx.alpha();
    const double p = std::pow(ctx.a(), alpha), q = std::pow(ctx.b(), alpha), u = std::pow(x, alpha);
    return ((u - p) * (u - p) + (q - u) * (q - u)) / (2.0 * alpha * alpha);
}

double moment_C(const AlphaInterval& ctx) {
    const double alpha = ctx.alpha();
    const double d = ctx.power_gap(1);
    return d * d * d * d / (6.0 * std::pow(alpha, 4));
}

double paper_bracket(const AlphaInterval& ctx) {
    const double alpha = ctx.alpha(), width = ctx.b() - ctx.a();
    const double g2 = ctx.power_gap(2), g3 = ctx.power_gap(3);
    return g3 / (3.0 * alpha) * width - g2 * g2 / (2.0 * alpha * alpha) + g2 / (2.0 * alpha) * width;
}

std::string_view identity_name(IdentityName n) {
    switch (n) {
        case IdentityName::IdentityK: return "identity_K";
        case IdentityName::IdentityH: return "identity_H";
        case IdentityName::MomentCCrosscheck: return "moment_C_crosscheck";
        case IdentityName::KernelAlpha1Agreement: return "kernel_alpha1_agreement";
    }
    return "?";
}

IdentityReport identity_K(const ExpressionFn& f, const ExpressionFn& g, const AlphaInterval& ctx,
                          const QuadratureSpec& spec, const IdentityTolerances& tol) {
    const double alpha = ctx.alpha();
    QuadResult lhs = alpha_integral_2d(
        [&](double x, double t) {
            return defect(f, x, t, alpha) * g.value(x) + defect(g, x, t, alpha) * f.value(x);
        },
        ctx, spec);
    GrussMoments m = compute_moments(f, g, ctx, spec);
    Estimate first = (ctx.power_gap(2) / alpha) * m.int_fg;
    Estimate sum = bracket_sum(m);
    Estimate rhs = first - sum;
    double scale = std::abs(first.value) + std::abs(sum.value);
    return make_identity(IdentityName::IdentityK, lhs.value, rhs.value, scale,
                         lhs.error_estimate + rhs.error, lhs.converged && rhs.converged, tol);
}

IdentityReport identity_H(const ExpressionFn& f, const ExpressionFn& g, const AlphaInterval& ctx,
                          const QuadratureSpec& spec, const IdentityTolerances& tol) {
    const double alpha = ctx.alpha();
    GrussMoments m = compute_moments(f, g, ctx, spec);
    Estimate lhs = ctx.moment(2) * functional_H(m, ctx);
    QuadResult rhs = alpha_integral_2d(
        [&](double x, double t) { return defect(f, x, t, alpha) * defect(g, x, t, alpha); }, ctx,
        spec);
    double scale = 2.0 * ctx.moment(2) * std::abs(m.int_fg.value) +
                   2.0 * std::abs(m.mom_f.value * m.mom_g.value);
    return make_identity(IdentityName::IdentityH, lhs.value, rhs.value, scale,
                         lhs.error + rhs.error_estimate, lhs.converged && rhs.converged, tol);
}

IdentityReport moment_C_crosscheck(const AlphaInterval& ctx, const QuadratureSpec& spec,
                                   const IdentityTolerances& tol) {
    const double alpha = ctx.alpha();
    QuadResult q = alpha_integral_2d(
        [&](double x, double t) {
            double d = (std::pow(t, alpha) - std::pow(x, alpha)) / alpha;
            return d * d;
        },
        ctx, spec);
    double c = moment_C(ctx);
    return make_identity(IdentityName::MomentCCrosscheck, c, q.value, c, q.error_estimate,
                         q.converged, tol);
}

IdentityReport kernel_alpha1_agreement(double a, double b) {
    AlphaInterval ctx(1.0, a, b);
    double worst = -1.0, lhs = 0.0, rhs = 0.0;
    for (int i = 0; i <= 100; ++i) {
        double x = i == 100 ? b : a + i * (b - a) / 100.0;
        double p = kernel_eval(x, ctx, KernelForm::Paper);
        double c = kernel_eval(x, ctx, KernelForm::Corrected);
        if (std::abs(p - c) > worst) {
            worst = std::abs(p - c);
            lhs = p;
            rhs = c;
        }
    }
    return make_identity(IdentityName::KernelAlpha1Agreement, lhs, rhs, 1.0, 0.0, true,
                         {1e-10, 1e-15});
}

std::string_view theorem_name(Theorem t) { return t == Theorem::Thm31 ? "thm31" : "thm32"; }

std::string_view variant_name(Variant v) {
    switch (v) {
        case Variant::Paper: return "paper";
        case Variant::Corrected: return "corrected";
        case Variant::Safe: return "safe";
    }
    return "?";
}

Variant variant_from_name(std::string_view name) {
    if (name == "paper") return Variant::Paper;
    if (name == "corrected") return Variant::Corrected;
    if (name == "safe") return Variant::Safe;
    throw ConfigError("variant: expected paper, corrected or safe, got '" + std::string(name) + "'");
}

CaseAnalysis analyze_case(const ExpressionFn& f, const ExpressionFn& g, const AlphaInterval& ctx,
                          const QuadratureSpec& spec, const SupOptions& sup_options) {
    CaseAnalysis c;
    c.moments = compute_moments(f, g, ctx, spec);
    SupOptions literal = sup_options;
    literal.form = PhiForm::PaperLiteral;
    SupOptions corrected = sup_options;
    corrected.form = PhiForm::Corrected;
    c.sup_f = sup_phi(f, ctx, corrected);
    c.sup_g = sup_phi(g, ctx, corrected);
    if (ctx.alpha() == 1.0) {
        c.sup_f_paper = c.sup_f;
        c.sup_g_paper = c.sup_g;
    } else {
        c.sup_f_paper = sup_phi(f, ctx, literal);
        c.sup_g_paper = sup_phi(g, ctx, literal);
    }
    return c;
}

BoundReport bound_thm31(const ExpressionFn& f, const ExpressionFn& g, const AlphaInterval& ctx,
                        const QuadratureSpec& spec, Variant variant, const CaseAnalysis& an) {
    const double alpha = ctx.alpha();
    const double sum_pow = std::pow(ctx.a(), alpha) + std::pow(ctx.b(), alpha);
    std::vector<double> pts;
    auto weighted = [&](auto&& fn) {
        return Estimate::from(integrate_piecewise(
            [&](double x) { return fn(x) * ctx.weight(x); }, pts, spec));
    };
    BoundReport r;
    switch (variant) {
        case Variant::Paper: {
            pts = kink_points(f, g, ctx, sum_pow / std::pow(2.0, alpha));
            Estimate lhs = abs_value(functional_K(an.moments, ctx));
            auto kernel = [&](double x) { return std::abs(kernel_eval(x, ctx, KernelForm::Paper)); };
            Estimate ig = weighted([&](double x) { return std::abs(g.value(x)) * kernel(x); });
            Estimate iff = weighted([&](double x) { return std::abs(f.value(x)) * kernel(x); });
            Estimate rhs = (an.sup_f_paper.value / alpha) * ig + (an.sup_g_paper.value / alpha) * iff;
            r = finish(Theorem::Thm31, variant, lhs, rhs);
            note_sup(r, an.sup_f_paper, "f");
            note_sup(r, an.sup_g_paper, "g");
            return r;
        }
        case Variant::Corrected: {
            pts = kink_points(f, g, ctx, std::pow(0.5 * sum_pow, 1.0 / alpha));
            Estimate lhs = abs_value(functional_K_corrected(an.moments, ctx));
            auto kernel = [&](double x) {
                return std::abs(kernel_eval(x, ctx, KernelForm::Corrected));
            };
            Estimate ig = weighted([&](double x) { return std::abs(g.value(x)) * kernel(x); });
            Estimate iff = weighted([&](double x) { return std::abs(f.value(x)) * kernel(x); });
            Estimate rhs = an.sup_f.value * ig + an.sup_g.value * iff;
            r = finish(Theorem::Thm31, variant, lhs, rhs);
            break;
        }
        case Variant::Safe: {
            pts = kink_points(f, g, ctx, std::nullopt);
            Estimate lhs = abs_value(functional_K_corrected(an.moments, ctx));
            const double pf = an.sup_f.value, pg = an.sup_g.value;
            Estimate integral = weighted([&](double x) {
                return abs_moment_m(x, ctx) * (pf * std::abs(g.value(x)) + pg * std::abs(f.value(x)));
            });
            Estimate rhs = (1.0 / ctx.power_gap(2)) * integral;
            r = finish(Theorem::Thm31, variant, lhs, rhs);
            break;
        }
    }
    note_sup(r, an.sup_f, "f");
    note_sup(r, an.sup_g, "g");
    return r;
}

BoundReport bound_thm31(const ExpressionFn& f, const ExpressionFn& g, const AlphaInterval& ctx,
                        const QuadratureSpec& spec, Variant variant) {
    return bound_thm31(f, g, ctx, spec, variant, analyze_case(f, g, ctx, spec));
}

BoundReport bound_thm32(const ExpressionFn&, const ExpressionFn&, const AlphaInterval& ctx,
                        const QuadratureSpec&, Variant variant, const CaseAnalysis& an) {
    Estimate lhs = abs_value(functional_H(an.moments, ctx));
    const double c = 3.0 * ctx.alpha() / ctx.power_gap(3);
    BoundReport r;
    if (variant == Variant::Paper) {
        double rhs = an.sup_f_paper.value * an.sup_g_paper.value * c * paper_bracket(ctx);
        r = finish(Theorem::Thm32, variant, lhs, Estimate::exact(rhs));
        if (rhs < 0.0) r.notes.emplace_back("paper-literal bracket is negative on this interval");
        note_sup(r, an.sup_f_paper, "f");
        note_sup(r, an.sup_g_paper, "g");
        return r;
    }
    double rhs = c * an.sup_f.value * an.sup_g.value * moment_C(ctx);
    r = finish(Theorem::Thm32, variant, lhs, Estimate::exact(rhs));
    note_sup(r, an.sup_f, "f");
    note_sup(r, an.sup_g, "g");
    return r;
}

BoundReport bound_thm32(const ExpressionFn& f, const ExpressionFn& g, const AlphaInterval& ctx,
                        const QuadratureSpec& spec, Variant variant) {
    return bound_thm32(f, g, ctx, spec, variant, analyze_case(f, g, ctx, spec));
}

}  // namespace confgruss
