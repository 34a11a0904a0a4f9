#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "vfindex/expr.hpp"

namespace vfindex {

/// Bivariate polynomial with exact rational coefficients, stored as a
/// canonical map (deg_x, deg_y) -> coefficient holding nonzero terms only.
class Polynomial {
public:
    using Monomial = std::pair<int, int>;
    using Terms = std::map<Monomial, Rational>;

    Polynomial() = default;

    static Polynomial constant(const Rational& c) {
        Polynomial p;
        if (c != 0) p.terms_[{0, 0}] = c;
        return p;
    }
    static Polynomial monomial(int i, int j, const Rational& c = Rational(1)) {
        Polynomial p;
        if (c != 0) p.terms_[{i, j}] = c;
        return p;
    }
    static Polynomial x() { return monomial(1, 0); }
    static Polynomial y() { return monomial(0, 1); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int degree() const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, m.first + m.second);
        return d;
    }

    std::optional<Rational> constant_value() const {
        if (terms_.empty()) return Rational(0);
        if (terms_.size() == 1 && terms_.begin()->first == Monomial{0, 0}) return terms_.begin()->second;
        return std::nullopt;
    }

    Polynomial& operator+=(const Polynomial& o) {
        for (const auto& [m, c] : o.terms_) accumulate(m, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        for (const auto& [m, c] : o.terms_) accumulate(m, Rational(-c));
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(const Polynomial& a) { return Polynomial() - a; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_)
                r.accumulate({ma.first + mb.first, ma.second + mb.second}, Rational(ca * cb));
        return r;
    }
    friend Polynomial operator*(const Rational& s, const Polynomial& a) {
        return Polynomial::constant(s) * a;
    }

    Polynomial pow(unsigned n) const {
        Polynomial result = constant(Rational(1));
        Polynomial base = *this;
        while (n) {
            if (n & 1u) result = result * base;
            n >>= 1u;
            if (n) base = base * base;
        }
        return result;
    }

    Polynomial derivative(int var) const {
        Polynomial r;
        for (const auto& [m, c] : terms_) {
            const int e = var == 0 ? m.first : m.second;
            if (e == 0) continue;
            const Monomial dm = var == 0 ? Monomial{m.first - 1, m.second} : Monomial{m.first, m.second - 1};
            r.accumulate(dm, Rational(c * e));
        }
        return r;
    }

    double eval(Vec2 p) const {
        double s = 0.0;
        for (const auto& [m, c] : terms_)
            s += static_cast<double>(c) * std::pow(p.x, m.first) * std::pow(p.y, m.second);
        return s;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

    /// Canonical expression: terms by descending total degree, then
    /// descending x-degree.
    ScalarExpr to_expr() const {
        std::vector<std::pair<Monomial, Rational>> ordered(terms_.begin(), terms_.end());
        std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
            const int da = a.first.first + a.first.second;
            const int db = b.first.first + b.first.second;
            if (da != db) return da > db;
            return a.first.first > b.first.first;
        });
        if (ordered.empty()) return ScalarExpr::constant(Rational(0));
        std::optional<ScalarExpr> acc;
        for (const auto& [m, c] : ordered) {
            ScalarExpr mono = ScalarExpr::constant(Rational(1));
            if (m.first > 0) mono = ScalarExpr::power(ScalarExpr::x(), m.first);
            if (m.second > 0) {
                ScalarExpr yy = ScalarExpr::power(ScalarExpr::y(), m.second);
                mono = m.first > 0 ? mono * yy : yy;
            }
            if (!acc) {
                acc = ScalarExpr::constant(c) * mono;
            } else if (c < 0) {
                acc = *acc - ScalarExpr::constant(Rational(-c)) * mono;
            } else {
                acc = *acc + ScalarExpr::constant(c) * mono;
            }
        }
        return *acc;
    }

private:
    Terms terms_;

    void accumulate(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }
};

/// Exact conversion of an expression tree to a polynomial. Succeeds for
/// trees of exact constants, variables, +, -, *, nonnegative integer powers
/// and divisions by nonzero constant subtrees; nullopt otherwise.
inline std::optional<Polynomial> to_polynomial(const ScalarExpr& e) {
    const Node& n = e.node();
    auto sub = [](const std::shared_ptr<const Node>& p) { return to_polynomial(ScalarExpr(p)); };
    switch (n.op) {
        case Op::Const:
            if (!n.exact) return std::nullopt;
            return Polynomial::constant(*n.exact);
        case Op::Var: return n.var == 0 ? Polynomial::x() : Polynomial::y();
        case Op::Add:
        case Op::Sub:
        case Op::Mul: {
            auto a = sub(n.lhs);
            if (!a) return std::nullopt;
            auto b = sub(n.rhs);
            if (!b) return std::nullopt;
            if (n.op == Op::Add) return *a + *b;
            if (n.op == Op::Sub) return *a - *b;
            return *a * *b;
        }
        case Op::Neg: {
            auto a = sub(n.lhs);
            if (!a) return std::nullopt;
            return -*a;
        }
        case Op::Div: {
            auto a = sub(n.lhs);
            auto b = sub(n.rhs);
            if (!a || !b) return std::nullopt;
            auto c = b->constant_value();
            if (!c || *c == 0) return std::nullopt;
            return Rational(Rational(1) / *c) * *a;
        }
        case Op::Pow: {
            if (n.exponent < 0) return std::nullopt;
            auto a = sub(n.lhs);
            if (!a) return std::nullopt;
            return a->pow(static_cast<unsigned>(n.exponent));
        }
        default: return std::nullopt;
    }
}

}  // namespace vfindex
