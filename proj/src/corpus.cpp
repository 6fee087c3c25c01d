#include "confgruss/corpus.hpp"

#include "confgruss/error.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace confgruss {

namespace {

constexpr std::array<std::string_view, 11> kOpNames = {
    "x", "+", "-", "*", "/", "^", "exp", "log", "sin", "cos", "sqrt"};

// Terminating decimals only, so printed constants read back exactly.
constexpr std::array<double, 10> kConstants = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0};
constexpr std::array<double, 6> kExponents = {2.0, 3.0, 0.5, 1.5, -1.0, 2.5};

class Generator {
public:
    Generator(std::mt19937_64& rng, const CorpusConstraints& c) : rng_(rng), c_(c) {
        for (Op op : c.allowed_ops.members())
            if (op != Op::Variable) inner_.push_back(op);
    }

    NodePtr node(int depth) {
        // The root is rarely a bare leaf; deeper levels terminate more often.
        double p_leaf = depth == 0 ? 0.1 : 0.35;
        if (inner_.empty() || depth >= c_.max_depth || uniform() < p_leaf) return leaf();
        Op op = inner_[pick(inner_.size())];
        switch (op) {
            case Op::Add: return build::binary(NodeKind::Add, node(depth + 1), node(depth + 1));
            case Op::Sub: return build::binary(NodeKind::Sub, node(depth + 1), node(depth + 1));
            case Op::Mul: return build::binary(NodeKind::Mul, node(depth + 1), node(depth + 1));
            case Op::Div: return build::binary(NodeKind::Div, node(depth + 1), node(depth + 1));
            case Op::Pow:
                return build::binary(NodeKind::Pow, node(depth + 1),
                                     build::constant(kExponents[pick(kExponents.size())]));
            case Op::Exp: return build::call(Func::Exp, node(depth + 1));
            case Op::Log: return build::call(Func::Log, node(depth + 1));
            case Op::Sin: return build::call(Func::Sin, node(depth + 1));
            case Op::Cos: return build::call(Func::Cos, node(depth + 1));
            case Op::Sqrt: return build::call(Func::Sqrt, node(depth + 1));
            case Op::Variable: break;
        }
        return leaf();
    }

private:
    NodePtr leaf() {
        if (c_.allowed_ops.contains(Op::Variable) && uniform() < 0.6) return build::variable();
        double v = kConstants[pick(kConstants.size())];
        return uniform() < 0.25 ? build::negate(build::constant(v)) : build::constant(v);
    }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
    std::size_t pick(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
    }

    std::mt19937_64& rng_;
    const CorpusConstraints& c_;
    std::vector<Op> inner_;
};

}  // namespace

std::vector<Op> OpSet::members() const {
    std::vector<Op> out;
    for (unsigned i = 0; i < kOpNames.size(); ++i)
        if (contains(static_cast<Op>(i))) out.push_back(static_cast<Op>(i));
    return out;
}

std::string_view op_name(Op op) { return kOpNames[static_cast<unsigned>(op)]; }

std::optional<Op> op_from_name(std::string_view name) {
    for (unsigned i = 0; i < kOpNames.size(); ++i)
        if (kOpNames[i] == name) return static_cast<Op>(i);
    if (name == "variable") return Op::Variable;
    return std::nullopt;
}

void CorpusConstraints::validate() const {
    if (!(a > 0.0 && a < b && std::isfinite(b)))
        throw ConfigError("constraints: interval must satisfy 0 < a < b");
    if (max_depth < 1) throw ConfigError("constraints: max_depth must be >= 1");
    if (!(magnitude_cap > 0.0)) throw ConfigError("constraints: magnitude_cap must be positive");
    if (max_retries < 1) throw ConfigError("constraints: max_retries must be >= 1");
}

ScreenOutcome screen_function(const ExpressionFn& f, const CorpusConstraints& c) {
    struct Margin {
        ExpressionFn subject;
        const DomainGuard* guard;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        double peak = 0.0;
    };
    std::vector<Margin> margins;
    for (const auto& guard : f.guards()) margins.push_back({parse_expr(guard.subject), &guard});

    const double h = (c.b - c.a) / (kScreenGridPoints - 1);
    for (int i = 0; i < kScreenGridPoints; ++i) {
        double x = i + 1 == kScreenGridPoints ? c.b : c.a + i * h;
        Dual d;
        try {
            d = f.eval(x);
            for (auto& m : margins) {
                double v = m.subject.value(x);
                m.lo = std::min(m.lo, v);
                m.hi = std::max(m.hi, v);
                m.peak = std::max(m.peak, std::abs(v));
            }
        } catch (const DomainError& e) {
            return {false, e.what()};
        }
        if (std::abs(d.value) > c.magnitude_cap) return {false, "magnitude cap exceeded"};
        if (std::abs(d.deriv) > 10.0 * c.magnitude_cap) return {false, "derivative cap exceeded"};
    }
    // A guarded subexpression must stay clear of zero on the whole interval, not
    // just at the grid points: reject sign changes and near-touches.
    for (const auto& m : margins) {
        const double floor = kGuardMarginFactor * std::max(1.0, m.peak);
        const bool clear = m.lo >= floor || m.hi <= -floor;
        if (!clear || (m.guard->kind == GuardKind::Positive && m.lo < floor))
            return {false, "guard too close to zero: " + m.guard->describe()};
    }
    return {true, {}};
}

ExpressionFn sample_function(std::uint64_t seed, const CorpusConstraints& constraints) {
    constraints.validate();
    std::mt19937_64 rng(seed);
    Generator gen(rng, constraints);
    std::string last_reason;
    for (int attempt = 0; attempt < constraints.max_retries; ++attempt) {
        // Round-trip through the printer so the function is exactly what its text says.
        ExpressionFn candidate = parse_expr(print_expr(gen.node(0)));
        ScreenOutcome screen = screen_function(candidate, constraints);
        if (screen.passed)
            return candidate.with_certified_interval({constraints.a, constraints.b});
        last_reason = screen.reason;
    }
    throw GenerationError("sample_function: no candidate passed the screen after " +
                          std::to_string(constraints.max_retries) +
                          " attempts (last: " + last_reason + ")");
}

}  // namespace confgruss
