#pragma once

// Conformable Pompeiu mean value theorem: for x1 != x2 in (0,∞) there is ξ
// between them with
//
//   (x1^α f(x2) - x2^α f(x1)) / (x1^α/α - x2^α/α) = φ_f(ξ),
//   φ_f(ξ) = α f(ξ) - ξ^α D_α f(ξ)  (= α f(ξ) - ξ f'(ξ)).
//
// The variant with ξ^{2-α} in place of ξ^α is kept as PhiForm::PaperLiteral.
// The two agree at α = 1; for α < 1 only the first makes the identity hold.

#include "confgruss/expr.hpp"

#include <optional>
#include <string_view>
#include <utility>

namespace confgruss {

/// Left side of the mean value identity. Symmetric in (x1, x2).
double pompeiu_quotient(const ExpressionFn& f, double x1, double x2, double alpha);

enum class PhiForm { Corrected, PaperLiteral };

double phi(const ExpressionFn& f, double xi, double alpha, PhiForm form = PhiForm::Corrected);

enum class XiStatus { Bracketed, ScanMin, DegenerateConstantPhi };
std::string_view xi_status_name(XiStatus s);

struct MeanValueResult {
    double xi = 0.0;
    double residual = 0.0;  // |φ(ξ) - Q|
    double quotient = 0.0;  // Q
    std::optional<std::pair<double, double>> bracket;
    XiStatus status = XiStatus::ScanMin;
};

struct FindXiOptions {
    int scan_points = 512;
    int max_bisections = 200;
    PhiForm form = PhiForm::Corrected;
};

/// Scans h(ξ) = φ(ξ) - Q on scan_points interior points of (x1,x2) and bisects
/// the leftmost sign change down to tol. Without a sign change the scan minimum
/// of |h| is polished by golden-section search (status ScanMin). If φ varies by
/// at most tol over the scan the midpoint is returned (DegenerateConstantPhi).
MeanValueResult find_xi(const ExpressionFn& f, double x1, double x2, double alpha, double tol,
                        const FindXiOptions& options = {});

}  // namespace confgruss
