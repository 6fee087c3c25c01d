#pragma once

// Scalar expressions in one variable with forward-mode first derivatives.
//
// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' factor)?
//   base   := number | 'x' | 'pi' | 'e' | ident '(' expr ')' | '(' expr ')' | '-' base
//   ident  := exp | log | sin | cos | sqrt
//
// Unary minus binds tighter than '^', so "-x^2" is (-x)^2.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace confgruss {

enum class NodeKind { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
enum class Func { Exp, Log, Sin, Cos, Sqrt };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind = NodeKind::Constant;
    double value = 0.0;       // Constant
    std::string name;         // Constant: "pi" / "e" when spelled symbolically
    Func func = Func::Exp;    // Call
    NodePtr lhs;              // unary operand, or left operand
    NodePtr rhs;              // right operand
    // Pow only: set when the exponent is x-free and integral; selects
    // repeated-multiplication semantics (valid for negative bases).
    std::optional<long> integer_exponent;
};

/// Value and first derivative at a point.
struct Dual {
    double value = 0.0;
    double deriv = 0.0;
};

enum class GuardKind { NonZero, Positive };

/// A recorded requirement on a subexpression; checked on every evaluation.
struct DomainGuard {
    GuardKind kind;
    std::string subject;  // printed subexpression
    std::string origin;   // "division", "log", "sqrt", "power"

    std::string describe() const;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Immutable parsed function of x. Cheap to copy (shares the tree).
class ExpressionFn {
public:
    ExpressionFn() = default;

    /// Wraps a tree; source text is the canonical printing of the tree.
    static ExpressionFn from_tree(NodePtr root);

    /// Throws DomainError when a guard is violated or the result is not finite.
    Dual eval(double x) const;
    double value(double x) const { return eval(x).value; }
    double deriv(double x) const { return eval(x).deriv; }

    const NodePtr& root() const { return root_; }
    const std::string& source_text() const { return source_; }
    const std::vector<DomainGuard>& guards() const { return guards_; }

    /// Interval on which evaluation was screened finite (set by the corpus screen).
    const std::optional<Interval>& certified_interval() const { return certified_; }
    ExpressionFn with_certified_interval(Interval iv) const;

    bool depends_on_x() const;
    bool structurally_equal(const ExpressionFn& other) const;

private:
    friend ExpressionFn parse_expr(std::string_view text);

    NodePtr root_;
    std::string source_;
    std::vector<DomainGuard> guards_;
    std::optional<Interval> certified_;
};

/// Throws ParseError (syntax, with position and expected token) on bad input,
/// including unknown identifiers.
ExpressionFn parse_expr(std::string_view text);

/// Canonical text: re-parsing it yields a structurally identical tree.
std::string print_expr(const NodePtr& node);

bool structurally_equal(const NodePtr& lhs, const NodePtr& rhs);

/// The (value, derivative) pair at x.
inline Dual eval_fn(const ExpressionFn& f, double x) { return f.eval(x); }

namespace build {

NodePtr constant(double v);  // negative values become Negate(Constant)
NodePtr named_constant(std::string_view name);
NodePtr variable();
NodePtr negate(NodePtr operand);
NodePtr binary(NodeKind kind, NodePtr lhs, NodePtr rhs);
NodePtr call(Func func, NodePtr arg);

}  // namespace build

std::string_view func_name(Func func);

}  // namespace confgruss
