#include "confgruss/pompeiu.hpp"

#include "confgruss/conformable.hpp"
#include "confgruss/error.hpp"
#include "confgruss/search.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace confgruss {

double pompeiu_quotient(const ExpressionFn& f, double x1, double x2, double alpha) {
    validate_alpha(alpha);
    if (!(x1 > 0.0 && x2 > 0.0)) throw DomainError("pompeiu_quotient: points must be positive");
    if (x1 == x2) throw DomainError("pompeiu_quotient: x1 == x2 (zero denominator)");
    const double p1 = std::pow(x1, alpha), p2 = std::pow(x2, alpha);
    return (p1 * f.value(x2) - p2 * f.value(x1)) / ((p1 - p2) / alpha);
}

double phi(const ExpressionFn& f, double xi, double alpha, PhiForm form) {
    const double d = conf_deriv(f, xi, alpha);
    const double scale = form == PhiForm::Corrected ? std::pow(xi, alpha) : std::pow(xi, 2.0 - alpha);
    return alpha * f.value(xi) - scale * d;
}

std::string_view xi_status_name(XiStatus s) {
    switch (s) {
        case XiStatus::Bracketed: return "bracketed";
        case XiStatus::ScanMin: return "scan_min";
        case XiStatus::DegenerateConstantPhi: return "degenerate_constant_phi";
    }
    return "?";
}

MeanValueResult find_xi(const ExpressionFn& f, double x1, double x2, double alpha, double tol,
                        const FindXiOptions& options) {
    if (!(x1 < x2)) throw ConfigError("find_xi: requires x1 < x2");
    if (!(tol > 0.0)) throw ConfigError("find_xi: tol must be positive");
    if (options.scan_points < 2) throw ConfigError("find_xi: scan_points must be >= 2");

    MeanValueResult out;
    out.quotient = pompeiu_quotient(f, x1, x2, alpha);
    const double q = out.quotient;
    auto h = [&](double xi) { return phi(f, xi, alpha, options.form) - q; };

    // pts[0] and pts[n+1] are the query points themselves; they may bound a
    // bracket but are never returned.
    const int n = options.scan_points;
    std::vector<double> pts(n + 2), hs(n + 2);
    const double step = (x2 - x1) / (n + 1);
    pts[0] = x1;
    pts[n + 1] = x2;
    for (int i = 1; i <= n; ++i) pts[i] = x1 + i * step;
    for (int i = 0; i < n + 2; ++i) hs[i] = h(pts[i]);

    auto [lo_it, hi_it] = std::minmax_element(hs.begin() + 1, hs.end() - 1);
    if (*hi_it - *lo_it <= tol) {
        out.xi = 0.5 * (x1 + x2);
        out.residual = std::abs(h(out.xi));
        out.status = XiStatus::DegenerateConstantPhi;
        return out;
    }

    for (int i = 0; i <= n; ++i) {
        if (i > 0 && hs[i] == 0.0) {
            out.xi = pts[i];
            out.residual = 0.0;
            out.bracket = std::pair{pts[i], pts[i]};
            out.status = XiStatus::Bracketed;
            return out;
        }
        if (!(std::signbit(hs[i]) != std::signbit(hs[i + 1]) && hs[i + 1] != 0.0)) continue;

        double lo = pts[i], hi = pts[i + 1], hlo = hs[i];
        SearchPoint best{0.5 * (lo + hi), std::abs(h(0.5 * (lo + hi)))};
        for (int k = 0; k < options.max_bisections; ++k) {
            double mid = 0.5 * (lo + hi);
            if (!(mid > lo && mid < hi)) break;
            double hm = h(mid);
            if (std::abs(hm) < best.value) best = {mid, std::abs(hm)};
            if (std::abs(hm) <= tol) break;
            if (std::signbit(hm) == std::signbit(hlo)) {
                lo = mid;
                hlo = hm;
            } else {
                hi = mid;
            }
        }
        out.xi = best.x;
        out.residual = best.value;
        out.bracket = std::pair{lo, hi};
        out.status = best.value <= tol ? XiStatus::Bracketed : XiStatus::ScanMin;
        return out;
    }

    // No sign change: polish the smallest |h| (a touching root, or a root
    // narrower than the scan spacing).
    int arg = 1;
    for (int i = 2; i <= n; ++i)
        if (std::abs(hs[i]) < std::abs(hs[arg])) arg = i;
    SearchPoint polished = golden_section_max([&](double xi) { return -std::abs(h(xi)); },
                                              pts[arg - 1], pts[arg + 1], 1e-14 * x2);
    if (-polished.value < std::abs(hs[arg])) {
        out.xi = polished.x;
        out.residual = -polished.value;
    } else {
        out.xi = pts[arg];
        out.residual = std::abs(hs[arg]);
    }
    out.status = XiStatus::ScanMin;
    return out;
}

}  // namespace confgruss
