#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "vfindex/geometry.hpp"

namespace vfindex {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Raised when an expression is evaluated outside its domain of definition
/// (division by zero, square root of a negative number, non-finite result).
class EvalDomainError : public std::domain_error {
public:
    EvalDomainError(const std::string& what, Vec2 at)
        : std::domain_error(what), point(at) {}
    Vec2 point;
};

enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp, Sqrt };

struct Node {
    Op op = Op::Const;
    double value = 0.0;             // Const
    std::optional<Rational> exact;  // Const, set when the literal is an exact decimal
    int var = 0;                    // Var: 0 = x, 1 = y
    int exponent = 0;               // Pow
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace detail {

inline std::string rational_to_string(const Rational& q) {
    BigInt num = boost::multiprecision::numerator(q);
    BigInt den = boost::multiprecision::denominator(q);
    const bool negative = num < 0;
    if (negative) num = -num;

    // Terminating decimal iff den = 2^a 5^b.
    BigInt rest = den;
    int twos = 0, fives = 0;
    while (rest % 2 == 0) { rest /= 2; ++twos; }
    while (rest % 5 == 0) { rest /= 5; ++fives; }
    std::string out;
    if (rest != 1) {
        out = "(" + num.str() + "/" + den.str() + ")";
    } else {
        const int k = std::max(twos, fives);
        BigInt scaled = num;
        for (int i = 0; i < k; ++i) scaled *= 10;
        scaled /= den;
        std::string digits = scaled.str();
        if (k > 0) {
            if (static_cast<int>(digits.size()) <= k)
                digits.insert(0, static_cast<std::size_t>(k - static_cast<int>(digits.size()) + 1), '0');
            digits.insert(digits.size() - static_cast<std::size_t>(k), ".");
            while (digits.back() == '0') digits.pop_back();
            if (digits.back() == '.') digits.pop_back();
        }
        out = digits;
    }
    return negative ? "-" + out : out;
}

inline std::string double_to_string(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Immutable scalar expression tree in the variables x and y.
///
/// Nodes are shared and never mutated, so copies are cheap and safe to use
/// from concurrent readers. The named constructors below fold exact
/// constants and drop neutral elements; no other simplification is done.
class ScalarExpr {
public:
    using NodePtr = std::shared_ptr<const Node>;

    ScalarExpr() : ScalarExpr(constant(Rational(0))) {}
    explicit ScalarExpr(NodePtr n) : node_(std::move(n)) {}

    static ScalarExpr constant(const Rational& q) {
        auto n = std::make_shared<Node>();
        n->op = Op::Const;
        n->exact = q;
        n->value = static_cast<double>(q);
        return ScalarExpr(std::move(n));
    }
    /// Inexact constant; trees containing one are never treated as exact polynomials.
    static ScalarExpr constant(double v) {
        auto n = std::make_shared<Node>();
        n->op = Op::Const;
        n->value = v;
        return ScalarExpr(std::move(n));
    }
    static ScalarExpr constant(int v) { return constant(Rational(v)); }
    static ScalarExpr variable(int which) {
        auto n = std::make_shared<Node>();
        n->op = Op::Var;
        n->var = which;
        return ScalarExpr(std::move(n));
    }
    static ScalarExpr x() { return variable(0); }
    static ScalarExpr y() { return variable(1); }

    const Node& node() const { return *node_; }
    const NodePtr& ptr() const { return node_; }

    bool is_const() const { return node_->op == Op::Const; }
    bool is_exact_const() const { return is_const() && node_->exact.has_value(); }
    bool is_exact_value(long v) const { return is_exact_const() && *node_->exact == v; }

    static ScalarExpr binary(Op op, const ScalarExpr& a, const ScalarExpr& b) {
        if (a.is_exact_const() && b.is_exact_const()) {
            const Rational& p = *a.node().exact;
            const Rational& q = *b.node().exact;
            switch (op) {
                case Op::Add: return constant(p + q);
                case Op::Sub: return constant(p - q);
                case Op::Mul: return constant(p * q);
                case Op::Div:
                    if (q != 0) return constant(p / q);
                    break;
                default: break;
            }
        }
        switch (op) {
            case Op::Add:
                if (a.is_exact_value(0)) return b;
                if (b.is_exact_value(0)) return a;
                break;
            case Op::Sub:
                if (b.is_exact_value(0)) return a;
                if (a.is_exact_value(0)) return unary(Op::Neg, b);
                break;
            case Op::Mul:
                if (a.is_exact_value(0) || b.is_exact_value(0)) return constant(Rational(0));
                if (a.is_exact_value(1)) return b;
                if (b.is_exact_value(1)) return a;
                if (a.is_exact_value(-1)) return unary(Op::Neg, b);
                if (b.is_exact_value(-1)) return unary(Op::Neg, a);
                break;
            case Op::Div:
                if (b.is_exact_value(1)) return a;
                if (a.is_exact_value(0) && !b.is_exact_value(0)) return constant(Rational(0));
                break;
            default: break;
        }
        auto n = std::make_shared<Node>();
        n->op = op;
        n->lhs = a.node_;
        n->rhs = b.node_;
        return ScalarExpr(std::move(n));
    }

    static ScalarExpr unary(Op op, const ScalarExpr& a) {
        if (op == Op::Neg) {
            if (a.is_exact_const()) return constant(Rational(-*a.node().exact));
            if (a.node().op == Op::Neg) return ScalarExpr(a.node().lhs);
        }
        auto n = std::make_shared<Node>();
        n->op = op;
        n->lhs = a.node_;
        return ScalarExpr(std::move(n));
    }

    static ScalarExpr power(const ScalarExpr& base, int exponent) {
        if (exponent == 0) return constant(Rational(1));
        if (exponent == 1) return base;
        if (base.is_exact_const()) {
            const Rational& b = *base.node().exact;
            if (exponent > 0 || b != 0) {
                Rational r(1);
                for (int i = 0; i < std::abs(exponent); ++i) r *= b;
                return constant(exponent > 0 ? r : Rational(1) / r);
            }
        }
        auto n = std::make_shared<Node>();
        n->op = Op::Pow;
        n->exponent = exponent;
        n->lhs = base.node_;
        return ScalarExpr(std::move(n));
    }

    friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) { return binary(Op::Add, a, b); }
    friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) { return binary(Op::Sub, a, b); }
    friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) { return binary(Op::Mul, a, b); }
    friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) { return binary(Op::Div, a, b); }
    friend ScalarExpr operator-(const ScalarExpr& a) { return unary(Op::Neg, a); }

    double eval(Vec2 p) const { return eval_node(*node_, p); }
    double operator()(Vec2 p) const { return eval(p); }

    ScalarExpr derivative(int var) const { return ScalarExpr(differentiate(node_, var)); }

    /// True iff the tree uses only constants, variables, +, -, * and
    /// nonnegative integer powers.
    bool is_polynomial() const { return polynomial_node(*node_); }

    /// True iff the tree contains no division and no square root, so the
    /// function is entire-analytic in (x, y).
    bool is_entire() const { return entire_node(*node_); }

    /// True iff every constant in the tree carries an exact value.
    bool all_constants_exact() const { return exact_node(*node_); }

    std::string to_string() const { return print(*node_); }

private:
    NodePtr node_;

    static double eval_node(const Node& n, Vec2 p) {
        double r = 0.0;
        switch (n.op) {
            case Op::Const: return n.value;
            case Op::Var: return n.var == 0 ? p.x : p.y;
            case Op::Add: r = eval_node(*n.lhs, p) + eval_node(*n.rhs, p); break;
            case Op::Sub: r = eval_node(*n.lhs, p) - eval_node(*n.rhs, p); break;
            case Op::Mul: r = eval_node(*n.lhs, p) * eval_node(*n.rhs, p); break;
            case Op::Div: {
                const double den = eval_node(*n.rhs, p);
                if (den == 0.0) throw EvalDomainError("division by zero", p);
                r = eval_node(*n.lhs, p) / den;
                break;
            }
            case Op::Neg: return -eval_node(*n.lhs, p);
            case Op::Pow: {
                const double b = eval_node(*n.lhs, p);
                if (b == 0.0 && n.exponent < 0) throw EvalDomainError("division by zero", p);
                r = ipow(b, n.exponent);
                break;
            }
            case Op::Sin: r = std::sin(eval_node(*n.lhs, p)); break;
            case Op::Cos: r = std::cos(eval_node(*n.lhs, p)); break;
            case Op::Exp: r = std::exp(eval_node(*n.lhs, p)); break;
            case Op::Sqrt: {
                const double a = eval_node(*n.lhs, p);
                if (a < 0.0) throw EvalDomainError("square root of a negative number", p);
                r = std::sqrt(a);
                break;
            }
        }
        if (!std::isfinite(r)) throw EvalDomainError("non-finite value", p);
        return r;
    }

    static double ipow(double b, int e) {
        double result = 1.0;
        double base = e < 0 ? 1.0 / b : b;
        unsigned k = static_cast<unsigned>(e < 0 ? -e : e);
        while (k) {
            if (k & 1u) result *= base;
            base *= base;
            k >>= 1u;
        }
        return result;
    }

    static NodePtr differentiate(const NodePtr& np, int var) {
        const Node& n = *np;
        const ScalarExpr u = n.lhs ? ScalarExpr(n.lhs) : ScalarExpr();
        const ScalarExpr v = n.rhs ? ScalarExpr(n.rhs) : ScalarExpr();
        auto d = [var](const ScalarExpr& e) { return e.derivative(var); };
        switch (n.op) {
            case Op::Const: return constant(Rational(0)).node_;
            case Op::Var: return constant(Rational(n.var == var ? 1 : 0)).node_;
            case Op::Add: return (d(u) + d(v)).node_;
            case Op::Sub: return (d(u) - d(v)).node_;
            case Op::Mul: return (d(u) * v + u * d(v)).node_;
            case Op::Div: return ((d(u) * v - u * d(v)) / power(v, 2)).node_;
            case Op::Neg: return (-d(u)).node_;
            case Op::Pow:
                return (constant(Rational(n.exponent)) * power(u, n.exponent - 1) * d(u)).node_;
            case Op::Sin: return (unary(Op::Cos, u) * d(u)).node_;
            case Op::Cos: return (-(unary(Op::Sin, u) * d(u))).node_;
            case Op::Exp: return (unary(Op::Exp, u) * d(u)).node_;
            case Op::Sqrt:
                return (d(u) / (constant(Rational(2)) * unary(Op::Sqrt, u))).node_;
        }
        return constant(Rational(0)).node_;
    }

    static bool polynomial_node(const Node& n) {
        switch (n.op) {
            case Op::Const:
            case Op::Var: return true;
            case Op::Add:
            case Op::Sub:
            case Op::Mul: return polynomial_node(*n.lhs) && polynomial_node(*n.rhs);
            case Op::Neg: return polynomial_node(*n.lhs);
            case Op::Pow: return n.exponent >= 0 && polynomial_node(*n.lhs);
            default: return false;
        }
    }

    static bool entire_node(const Node& n) {
        switch (n.op) {
            case Op::Const:
            case Op::Var: return true;
            case Op::Div:
            case Op::Sqrt: return false;
            case Op::Pow:
                return n.exponent >= 0 && entire_node(*n.lhs);
            default:
                return (!n.lhs || entire_node(*n.lhs)) && (!n.rhs || entire_node(*n.rhs));
        }
    }

    static bool exact_node(const Node& n) {
        if (n.op == Op::Const) return n.exact.has_value();
        return (!n.lhs || exact_node(*n.lhs)) && (!n.rhs || exact_node(*n.rhs));
    }

    // Precedence levels used for minimal parenthesisation.
    static int level(const Node& n) {
        switch (n.op) {
            case Op::Add:
            case Op::Sub: return 1;
            case Op::Mul:
            case Op::Div: return 2;
            case Op::Neg: return 3;
            case Op::Pow: return 4;
            case Op::Const: {
                const bool negative = n.exact ? *n.exact < 0 : n.value < 0.0;
                return negative ? 3 : 5;
            }
            default: return 5;
        }
    }

    static std::string wrap(const Node& n, int min_level) {
        std::string s = print(n);
        return level(n) < min_level ? "(" + s + ")" : s;
    }

    static std::string print(const Node& n) {
        switch (n.op) {
            case Op::Const:
                return n.exact ? detail::rational_to_string(*n.exact) : detail::double_to_string(n.value);
            case Op::Var: return n.var == 0 ? "x" : "y";
            case Op::Add: return wrap(*n.lhs, 1) + " + " + wrap(*n.rhs, 1);
            case Op::Sub: return wrap(*n.lhs, 1) + " - " + wrap(*n.rhs, 2);
            case Op::Mul: return wrap(*n.lhs, 2) + "*" + wrap(*n.rhs, 3);
            case Op::Div: return wrap(*n.lhs, 2) + "/" + wrap(*n.rhs, 3);
            case Op::Neg: return "-" + wrap(*n.lhs, 3);
            case Op::Pow: {
                std::string e = n.exponent < 0 ? "(" + std::to_string(n.exponent) + ")"
                                               : std::to_string(n.exponent);
                return wrap(*n.lhs, 5) + "^" + e;
            }
            case Op::Sin: return "sin(" + print(*n.lhs) + ")";
            case Op::Cos: return "cos(" + print(*n.lhs) + ")";
            case Op::Exp: return "exp(" + print(*n.lhs) + ")";
            case Op::Sqrt: return "sqrt(" + print(*n.lhs) + ")";
        }
        return {};
    }
};

inline ScalarExpr sin(const ScalarExpr& a) { return ScalarExpr::unary(Op::Sin, a); }
inline ScalarExpr cos(const ScalarExpr& a) { return ScalarExpr::unary(Op::Cos, a); }
inline ScalarExpr exp(const ScalarExpr& a) { return ScalarExpr::unary(Op::Exp, a); }
inline ScalarExpr sqrt(const ScalarExpr& a) { return ScalarExpr::unary(Op::Sqrt, a); }
inline ScalarExpr pow(const ScalarExpr& a, int n) { return ScalarExpr::power(a, n); }

}  // namespace vfindex
