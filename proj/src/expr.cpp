#include "confgruss/expr.hpp"

#include "confgruss/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

namespace confgruss {

namespace {

bool is_binary(NodeKind k) {
    return k == NodeKind::Add || k == NodeKind::Sub || k == NodeKind::Mul ||
           k == NodeKind::Div || k == NodeKind::Pow;
}

int precedence(const Node& n) {
    switch (n.kind) {
        case NodeKind::Add:
        case NodeKind::Sub: return 1;
        case NodeKind::Mul:
        case NodeKind::Div: return 2;
        case NodeKind::Pow: return 3;
        default: return 4;
    }
}

bool contains_variable(const NodePtr& n) {
    if (!n) return false;
    if (n->kind == NodeKind::Variable) return true;
    return contains_variable(n->lhs) || contains_variable(n->rhs);
}

// Constant folding for x-free subtrees; used only to classify exponents.
std::optional<double> fold(const NodePtr& n) {
    if (contains_variable(n)) return std::nullopt;
    try {
        ExpressionFn tmp = ExpressionFn::from_tree(n);
        return tmp.value(0.0);
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

[[noreturn]] void domain_fail(const std::string& what, double x) {
    throw DomainError(what + " at x = " + format_number(x));
}

double checked(double v, const char* what, double x) {
    if (!std::isfinite(v)) domain_fail(std::string("non-finite ") + what, x);
    return v;
}

Dual ipow(Dual u, long n) {
    // u^n by squaring; derivative n u^(n-1) u'.
    auto raise = [](double base, long e) {
        bool invert = e < 0;
        unsigned long k = invert ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
        double r = 1.0;
        while (k) {
            if (k & 1UL) r *= base;
            base *= base;
            k >>= 1;
        }
        return invert ? 1.0 / r : r;
    };
    if (n == 0) return {1.0, 0.0};
    return {raise(u.value, n), static_cast<double>(n) * raise(u.value, n - 1) * u.deriv};
}

Dual eval_node(const Node& n, double x) {
    switch (n.kind) {
        case NodeKind::Constant: return {n.value, 0.0};
        case NodeKind::Variable: return {x, 1.0};
        case NodeKind::Negate: {
            Dual u = eval_node(*n.lhs, x);
            return {-u.value, -u.deriv};
        }
        case NodeKind::Add: {
            Dual u = eval_node(*n.lhs, x), v = eval_node(*n.rhs, x);
            return {u.value + v.value, u.deriv + v.deriv};
        }
        case NodeKind::Sub: {
            Dual u = eval_node(*n.lhs, x), v = eval_node(*n.rhs, x);
            return {u.value - v.value, u.deriv - v.deriv};
        }
        case NodeKind::Mul: {
            Dual u = eval_node(*n.lhs, x), v = eval_node(*n.rhs, x);
            return {u.value * v.value, u.deriv * v.value + u.value * v.deriv};
        }
        case NodeKind::Div: {
            Dual u = eval_node(*n.lhs, x), v = eval_node(*n.rhs, x);
            if (v.value == 0.0) domain_fail("division by zero", x);
            double q = u.value / v.value;
            return {q, (u.deriv - q * v.deriv) / v.value};
        }
        case NodeKind::Pow: {
            Dual u = eval_node(*n.lhs, x);
            if (n.integer_exponent) {
                if (*n.integer_exponent < 0 && u.value == 0.0)
                    domain_fail("zero base with negative exponent", x);
                return ipow(u, *n.integer_exponent);
            }
            Dual v = eval_node(*n.rhs, x);
            if (!(u.value > 0.0)) domain_fail("non-positive base with non-integer exponent", x);
            double p = std::pow(u.value, v.value);
            double lu = std::log(u.value);
            return {p, p * (v.deriv * lu + v.value * u.deriv / u.value)};
        }
        case NodeKind::Call: {
            Dual u = eval_node(*n.lhs, x);
            switch (n.func) {
                case Func::Exp: {
                    double e = std::exp(u.value);
                    return {e, e * u.deriv};
                }
                case Func::Log:
                    if (!(u.value > 0.0)) domain_fail("log of non-positive argument", x);
                    return {std::log(u.value), u.deriv / u.value};
                case Func::Sin: return {std::sin(u.value), std::cos(u.value) * u.deriv};
                case Func::Cos: return {std::cos(u.value), -std::sin(u.value) * u.deriv};
                case Func::Sqrt: {
                    if (!(u.value > 0.0)) domain_fail("sqrt of non-positive argument", x);
                    double s = std::sqrt(u.value);
                    return {s, 0.5 * u.deriv / s};
                }
            }
        }
    }
    return {};
}

void collect_guards(const NodePtr& n, std::vector<DomainGuard>& out) {
    if (!n) return;
    collect_guards(n->lhs, out);
    collect_guards(n->rhs, out);
    switch (n->kind) {
        case NodeKind::Div:
            out.push_back({GuardKind::NonZero, print_expr(n->rhs), "division"});
            break;
        case NodeKind::Pow:
            if (!n->integer_exponent)
                out.push_back({GuardKind::Positive, print_expr(n->lhs), "power"});
            else if (*n->integer_exponent < 0)
                out.push_back({GuardKind::NonZero, print_expr(n->lhs), "power"});
            break;
        case NodeKind::Call:
            if (n->func == Func::Log)
                out.push_back({GuardKind::Positive, print_expr(n->lhs), "log"});
            else if (n->func == Func::Sqrt)
                out.push_back({GuardKind::Positive, print_expr(n->lhs), "sqrt"});
            break;
        default: break;
    }
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected '" + std::string(1, text_[pos_]) + "'", "operator or end of input");
        return e;
    }

private:
    static constexpr const char* kOperand = "number, 'x', constant, function call, '(' or '-'";

    [[noreturn]] void fail(const std::string& what, const std::string& expected) const {
        std::string where = pos_ >= text_.size() ? "end of input" : "position " + std::to_string(pos_);
        throw ParseError("syntax error at " + where + ": " + what + "; expected " + expected, pos_,
                         expected);
    }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                       text_[pos_] == '\n' || text_[pos_] == '\r'))
            ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = build::binary(NodeKind::Add, lhs, term());
            else if (accept('-')) lhs = build::binary(NodeKind::Sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        for (;;) {
            if (accept('*')) lhs = build::binary(NodeKind::Mul, lhs, factor());
            else if (accept('/')) lhs = build::binary(NodeKind::Div, lhs, factor());
            else return lhs;
        }
    }

    NodePtr factor() {
        NodePtr b = base();
        if (accept('^')) return build::binary(NodeKind::Pow, b, factor());
        return b;
    }

    NodePtr base() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input", kOperand);
        char c = text_[pos_];
        if (c == '-') {
            ++pos_;
            return build::negate(base());
        }
        if (c == '(') {
            ++pos_;
            NodePtr inner = expr();
            if (!accept(')')) fail("unbalanced parenthesis", "')'");
            return inner;
        }
        if ((c >= '0' && c <= '9') || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail("unexpected '" + std::string(1, c) + "'", kOperand);
    }

    NodePtr number() {
        std::size_t start = pos_;
        auto digits = [&] {
            std::size_t s = pos_;
            while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
            return pos_ - s;
        };
        std::size_t n = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            n += digits();
        }
        if (n == 0) {
            pos_ = start;
            fail("malformed number", "digit");
        }
        // Exponent only when a digit follows ("2e" alone is not a literal).
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (digits() == 0) pos_ = save;
        }
        double v = 0.0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (res.ec != std::errc{} || !std::isfinite(v)) {
            pos_ = start;
            fail("number out of range", "finite decimal literal");
        }
        return build::constant(v);
    }

    NodePtr identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::string_view id = text_.substr(start, pos_ - start);
        if (id == "x") return build::variable();
        if (id == "pi" || id == "e") return build::named_constant(id);
        static constexpr Func kFuncs[] = {Func::Exp, Func::Log, Func::Sin, Func::Cos, Func::Sqrt};
        for (Func f : kFuncs) {
            if (id == func_name(f)) {
                if (!accept('(')) fail("expected '(' after " + std::string(id), "'('");
                NodePtr arg = expr();
                if (!accept(')')) fail("unbalanced parenthesis", "')'");
                return build::call(f, arg);
            }
        }
        pos_ = start;
        throw ParseError("unknown identifier '" + std::string(id) + "' at position " +
                             std::to_string(start),
                         start, "x, pi, e, exp, log, sin, cos or sqrt");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::string wrap(const NodePtr& n, bool parens) {
    std::string s = print_expr(n);
    return parens ? "(" + s + ")" : s;
}

}  // namespace

std::string_view func_name(Func func) {
    switch (func) {
        case Func::Exp: return "exp";
        case Func::Log: return "log";
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Sqrt: return "sqrt";
    }
    return "?";
}

std::string DomainGuard::describe() const {
    return origin + ": " + subject + (kind == GuardKind::NonZero ? " != 0" : " > 0");
}

namespace build {

NodePtr constant(double v) {
    if (std::signbit(v) && v != 0.0) return negate(constant(-v));
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Constant;
    n->value = v == 0.0 ? 0.0 : v;
    return n;
}

NodePtr named_constant(std::string_view name) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Constant;
    n->name = std::string(name);
    n->value = name == "pi" ? std::numbers::pi : std::numbers::e;
    return n;
}

NodePtr variable() {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Variable;
    return n;
}

NodePtr negate(NodePtr operand) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Negate;
    n->lhs = std::move(operand);
    return n;
}

NodePtr binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    if (kind == NodeKind::Pow) {
        if (auto e = fold(n->rhs); e && std::isfinite(*e) && std::nearbyint(*e) == *e &&
                                   std::abs(*e) <= 1e6)
            n->integer_exponent = static_cast<long>(*e);
    }
    return n;
}

NodePtr call(Func func, NodePtr arg) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Call;
    n->func = func;
    n->lhs = std::move(arg);
    return n;
}

}  // namespace build

std::string print_expr(const NodePtr& node) {
    const Node& n = *node;
    switch (n.kind) {
        case NodeKind::Constant: return n.name.empty() ? format_number(n.value) : n.name;
        case NodeKind::Variable: return "x";
        case NodeKind::Negate: return "-" + wrap(n.lhs, is_binary(n.lhs->kind));
        case NodeKind::Call: return std::string(func_name(n.func)) + "(" + print_expr(n.lhs) + ")";
        case NodeKind::Pow:
            return wrap(n.lhs, is_binary(n.lhs->kind)) + "^" + wrap(n.rhs, precedence(*n.rhs) < 3);
        default: break;
    }
    int p = precedence(n);
    const char* op = n.kind == NodeKind::Add   ? " + "
                     : n.kind == NodeKind::Sub ? " - "
                     : n.kind == NodeKind::Mul ? "*"
                                               : "/";
    return wrap(n.lhs, precedence(*n.lhs) < p) + op + wrap(n.rhs, precedence(*n.rhs) <= p);
}

bool structurally_equal(const NodePtr& lhs, const NodePtr& rhs) {
    if (!lhs || !rhs) return !lhs && !rhs;
    if (lhs->kind != rhs->kind) return false;
    switch (lhs->kind) {
        case NodeKind::Constant: return lhs->name == rhs->name && lhs->value == rhs->value;
        case NodeKind::Variable: return true;
        case NodeKind::Call:
            return lhs->func == rhs->func && structurally_equal(lhs->lhs, rhs->lhs);
        default:
            return structurally_equal(lhs->lhs, rhs->lhs) && structurally_equal(lhs->rhs, rhs->rhs);
    }
}

ExpressionFn ExpressionFn::from_tree(NodePtr root) {
    ExpressionFn f;
    f.source_ = print_expr(root);
    collect_guards(root, f.guards_);
    f.root_ = std::move(root);
    return f;
}

ExpressionFn parse_expr(std::string_view text) {
    ExpressionFn f;
    f.root_ = Parser(text).parse();
    f.source_ = std::string(text);
    collect_guards(f.root_, f.guards_);
    return f;
}

Dual ExpressionFn::eval(double x) const {
    if (!root_) throw DomainError("evaluation of an empty expression");
    Dual r = eval_node(*root_, x);
    checked(r.value, "value", x);
    checked(r.deriv, "derivative", x);
    return r;
}

ExpressionFn ExpressionFn::with_certified_interval(Interval iv) const {
    ExpressionFn copy = *this;
    copy.certified_ = iv;
    return copy;
}

bool ExpressionFn::depends_on_x() const { return contains_variable(root_); }

bool ExpressionFn::structurally_equal(const ExpressionFn& other) const {
    return confgruss::structurally_equal(root_, other.root_);
}

}  // namespace confgruss
