#include "confgruss/quadrature.hpp"

#include "confgruss/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace confgruss {

namespace {

constexpr double kRoundoffFloor = 50.0 * std::numeric_limits<double>::epsilon();

GaussRule make_gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute P_n' at the converged node for the weight.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

struct RuleValue {
    double value;
    double abs_value;  // same rule applied to |f|
};

struct Panel {
    double a, b;
    RuleValue whole;
    RuleValue left, right;
    double value() const { return left.value + right.value; }
    double error() const {
        double diff = std::abs(left.value + right.value - whole.value);
        return std::max(diff, kRoundoffFloor * (left.abs_value + right.abs_value));
    }
};

class Engine {
public:
    Engine(const Integrand& f, const QuadratureSpec& spec) : f_(f), spec_(spec) {}

    QuadResult run(double a, double b) {
        if (a == b) return {0.0, 0.0, 0, true};
        std::vector<Panel> panels{make_panel(a, b, apply(a, b))};
        double value = panels.front().value();
        double error = panels.front().error();
        auto done = [&] { return error <= std::max(spec_.abs_tol, spec_.rel_tol * std::abs(value)); };
        for (int splits = 0; !done() && splits < spec_.max_subdivisions; ++splits) {
            auto worst_it = std::max_element(panels.begin(), panels.end(), [](const Panel& l, const Panel& r) {
                return l.error() < r.error();
            });
            Panel worst = *worst_it;
            double m = 0.5 * (worst.a + worst.b);
            if (!(m > worst.a && m < worst.b)) break;  // no longer bisectable in double precision
            *worst_it = make_panel(worst.a, m, worst.left);
            panels.push_back(make_panel(m, worst.b, worst.right));
            value = 0.0;
            error = 0.0;
            for (const Panel& p : panels) {
                value += p.value();
                error += p.error();
            }
        }
        return {value, error, evaluations_, done()};
    }

private:
    Panel make_panel(double a, double b, RuleValue whole) {
        double m = 0.5 * (a + b);
        return {a, b, whole, apply(a, m), apply(m, b)};
    }

    RuleValue apply(double a, double b) {
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        double sum = 0.0, abs_sum = 0.0;
        if (spec_.base_rule == BaseRule::GaussLegendre15) {
            const GaussRule& rule = gauss_legendre_15();
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                double y = f_(mid + half * rule.nodes[i]);
                sum += rule.weights[i] * y;
                abs_sum += rule.weights[i] * std::abs(y);
            }
            evaluations_ += static_cast<long>(rule.nodes.size());
            return {half * sum, half * abs_sum};
        }
        // Composite Simpson over 8 sub-panels (17 points).
        constexpr int kPanels = 8;
        const double h = (b - a) / (2 * kPanels);
        for (int i = 0; i <= 2 * kPanels; ++i) {
            double x = i == 2 * kPanels ? b : a + i * h;
            double w = (i == 0 || i == 2 * kPanels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            double y = f_(x);
            sum += w * y;
            abs_sum += w * std::abs(y);
        }
        evaluations_ += 2 * kPanels + 1;
        return {sum * h / 3.0, abs_sum * h / 3.0};
    }

    const Integrand& f_;
    const QuadratureSpec& spec_;
    long evaluations_ = 0;
};

}  // namespace

std::string_view base_rule_name(BaseRule rule) {
    return rule == BaseRule::GaussLegendre15 ? "gauss_legendre_15" : "simpson_composite";
}

BaseRule base_rule_from_name(std::string_view name) {
    if (name == "gauss_legendre_15") return BaseRule::GaussLegendre15;
    if (name == "simpson_composite") return BaseRule::SimpsonComposite;
    throw ConfigError("base_rule: unknown rule '" + std::string(name) + "'");
}

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0)) throw ConfigError("tolerances.abs_tol must be positive");
    if (!(rel_tol > 0.0)) throw ConfigError("tolerances.rel_tol must be positive");
    if (max_subdivisions < 1) throw ConfigError("tolerances.max_subdivisions must be >= 1");
}

const GaussRule& gauss_legendre_15() {
    static const GaussRule rule = make_gauss_legendre(15);
    return rule;
}

QuadResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    if (b < a) {
        QuadResult r = integrate(f, b, a, spec);
        r.value = -r.value;
        return r;
    }
    return Engine(f, spec).run(a, b);
}

QuadResult integrate_piecewise(const Integrand& f, const std::vector<double>& points,
                               const QuadratureSpec& spec) {
    spec.validate();
    if (points.size() < 2) throw ConfigError("integrate_piecewise: need at least two points");
    if (!std::is_sorted(points.begin(), points.end()))
        throw ConfigError("integrate_piecewise: points must be sorted");
    const double total = points.back() - points.front();
    QuadResult out{0.0, 0.0, 0, true};
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double lo = points[i], hi = points[i + 1];
        if (!(hi > lo)) continue;
        QuadratureSpec piece = spec;
        piece.abs_tol = spec.abs_tol * (hi - lo) / total;
        QuadResult r = Engine(f, piece).run(lo, hi);
        out.value += r.value;
        out.error_estimate += r.error_estimate;
        out.evaluations += r.evaluations;
        out.converged = out.converged && r.converged;
    }
    return out;
}

QuadResult integrate_2d(const Integrand2D& f, double a, double b, double c, double d,
                        const QuadratureSpec& spec) {
    spec.validate();
    long evaluations = 0;
    bool inner_converged = true;
    double worst_inner_error = 0.0;
    Integrand outer = [&](double x) {
        QuadResult inner = integrate([&](double t) { return f(x, t); }, c, d, spec);
        evaluations += inner.evaluations;
        inner_converged = inner_converged && inner.converged;
        worst_inner_error = std::max(worst_inner_error, inner.error_estimate);
        return inner.value;
    };
    QuadResult r = integrate(outer, a, b, spec);
    r.evaluations = evaluations;
    r.error_estimate += std::abs(b - a) * worst_inner_error;
    r.converged = r.converged && inner_converged;
    return r;
}

}  // namespace confgruss
