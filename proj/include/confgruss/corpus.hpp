#pragma once

// Seeded random test functions for the verification sweeps.

#include "confgruss/expr.hpp"

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace confgruss {

/// Building blocks the generator may use. `Variable` gates the leaf `x`;
/// without it every function is constant.
enum class Op : unsigned { Variable, Add, Sub, Mul, Div, Pow, Exp, Log, Sin, Cos, Sqrt };

class OpSet {
public:
    constexpr OpSet() = default;
    constexpr OpSet(std::initializer_list<Op> ops) {
        for (Op op : ops) bits_ |= bit(op);
    }

    static constexpr OpSet all() {
        return {Op::Variable, Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Pow,
                Op::Exp,      Op::Log, Op::Sin, Op::Cos, Op::Sqrt};
    }
    static constexpr OpSet constants_only() { return {}; }

    constexpr bool contains(Op op) const { return (bits_ & bit(op)) != 0; }
    constexpr OpSet with(Op op) const {
        OpSet out = *this;
        out.bits_ |= bit(op);
        return out;
    }
    constexpr bool operator==(const OpSet&) const = default;

    std::vector<Op> members() const;

private:
    static constexpr unsigned bit(Op op) { return 1U << static_cast<unsigned>(op); }
    unsigned bits_ = 0;
};

std::string_view op_name(Op op);
std::optional<Op> op_from_name(std::string_view name);

struct CorpusConstraints {
    double a = 0.5;
    double b = 5.0;
    int max_depth = 3;
    double magnitude_cap = 50.0;
    OpSet allowed_ops = OpSet::all();
    int max_retries = 500;

    void validate() const;  // throws ConfigError
};

/// Result of screening one candidate against CorpusConstraints.
struct ScreenOutcome {
    bool passed = false;
    std::string reason;
};

inline constexpr int kScreenGridPoints = 1001;
inline constexpr double kGuardMarginFactor = 1e-3;

/// Evaluates f and f' on a 1001-point grid over [a,b]: every point must be in
/// the domain with |f| <= cap and |f'| <= 10 cap. Each guarded subexpression
/// (denominator, log/sqrt argument, base of a fractional power) must keep one
/// sign with |value| >= 1e-3 max(1, peak |value|) on the grid.
ScreenOutcome screen_function(const ExpressionFn& f, const CorpusConstraints& c);

/// Pure function of (seed, constraints). The returned function carries the
/// screened interval as its certified interval. Throws GenerationError once
/// max_retries candidates have failed the screen.
ExpressionFn sample_function(std::uint64_t seed, const CorpusConstraints& constraints);

}  // namespace confgruss
