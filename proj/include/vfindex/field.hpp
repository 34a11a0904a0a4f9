#pragma once

#include <array>
#include <concepts>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "vfindex/expr.hpp"
#include "vfindex/parser.hpp"
#include "vfindex/polynomial.hpp"

namespace vfindex {

/// A planar vector field that can be evaluated and differentiated pointwise.
template <class F>
concept PlanarField = requires(const F& f, Vec2 p) {
    { f(p) } -> std::convertible_to<Vec2>;
    { f.jacobian(p) } -> std::convertible_to<Mat2>;
};

/// Parsed two-component field expression with symbolic Jacobian.
class FieldExpr {
public:
    FieldExpr() : FieldExpr(ScalarExpr::constant(0), ScalarExpr::constant(0)) {}
    FieldExpr(ScalarExpr fx, ScalarExpr fy) : comp_{std::move(fx), std::move(fy)} {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) jac_[2 * i + j] = comp_[i].derivative(j);
        polynomial_ = comp_[0].is_polynomial() && comp_[1].is_polynomial();
    }

    const ScalarExpr& component(int i) const { return comp_[static_cast<std::size_t>(i)]; }
    const ScalarExpr& partial(int comp, int var) const { return jac_[static_cast<std::size_t>(2 * comp + var)]; }

    Vec2 operator()(Vec2 p) const { return {comp_[0].eval(p), comp_[1].eval(p)}; }

    Mat2 jacobian(Vec2 p) const {
        return {jac_[0].eval(p), jac_[1].eval(p), jac_[2].eval(p), jac_[3].eval(p)};
    }

    double divergence(Vec2 p) const { return jac_[0].eval(p) + jac_[3].eval(p); }

    bool is_polynomial() const { return polynomial_; }
    bool is_entire() const { return comp_[0].is_entire() && comp_[1].is_entire(); }

    /// Exact polynomial form of both components when every constant is exact.
    std::optional<std::array<Polynomial, 2>> polynomials() const {
        auto a = to_polynomial(comp_[0]);
        if (!a) return std::nullopt;
        auto b = to_polynomial(comp_[1]);
        if (!b) return std::nullopt;
        return std::array<Polynomial, 2>{std::move(*a), std::move(*b)};
    }

    std::string to_string() const { return "(" + comp_[0].to_string() + ", " + comp_[1].to_string() + ")"; }

    static FieldExpr from_polynomials(const Polynomial& px, const Polynomial& py) {
        return {px.to_expr(), py.to_expr()};
    }

    friend FieldExpr operator+(const FieldExpr& a, const FieldExpr& b) {
        return {a.comp_[0] + b.comp_[0], a.comp_[1] + b.comp_[1]};
    }
    friend FieldExpr operator-(const FieldExpr& a, const FieldExpr& b) {
        return {a.comp_[0] - b.comp_[0], a.comp_[1] - b.comp_[1]};
    }
    friend FieldExpr operator*(const ScalarExpr& h, const FieldExpr& a) {
        return {h * a.comp_[0], h * a.comp_[1]};
    }

private:
    std::array<ScalarExpr, 2> comp_;
    std::array<ScalarExpr, 4> jac_;
    bool polynomial_ = true;
};

inline FieldExpr parse_field(std::string_view src) {
    auto [a, b] = detail::Parser(src).field();
    return {std::move(a), std::move(b)};
}

/// Regularity facts a caller can rely on when certifying hypotheses.
struct Regularity {
    bool analytic = false;
    bool c2 = false;
};

/// Type-erased planar field. Keeps the symbolic form when built from a
/// FieldExpr so that exact algebra remains available downstream.
class AnyField {
public:
    AnyField() : AnyField(FieldExpr{}) {}

    AnyField(FieldExpr e)  // NOLINT(google-explicit-constructor)
        : value_([e](Vec2 p) { return e(p); }),
          jacobian_([e](Vec2 p) { return e.jacobian(p); }),
          expr_(e),
          label_(e.to_string()),
          regularity_{e.is_entire(), true} {}

    template <PlanarField F>
        requires(!std::same_as<std::remove_cvref_t<F>, AnyField> &&
                 !std::same_as<std::remove_cvref_t<F>, FieldExpr>)
    AnyField(F f, std::string label, Regularity reg)
        : value_([f](Vec2 p) { return Vec2(f(p)); }),
          jacobian_([f](Vec2 p) { return Mat2(f.jacobian(p)); }),
          label_(std::move(label)),
          regularity_(reg) {}

    AnyField(std::function<Vec2(Vec2)> value, std::function<Mat2(Vec2)> jacobian, std::string label,
             Regularity reg)
        : value_(std::move(value)), jacobian_(std::move(jacobian)), label_(std::move(label)), regularity_(reg) {}

    Vec2 operator()(Vec2 p) const { return value_(p); }
    Mat2 jacobian(Vec2 p) const { return jacobian_(p); }

    const std::optional<FieldExpr>& expr() const { return expr_; }
    const std::string& label() const { return label_; }
    Regularity regularity() const { return regularity_; }

private:
    std::function<Vec2(Vec2)> value_;
    std::function<Mat2(Vec2)> jacobian_;
    std::optional<FieldExpr> expr_;
    std::string label_;
    Regularity regularity_;
};

/// a*X + b*Y; symbolic when both inputs are.
inline AnyField linear_combination(double a, const AnyField& X, double b, const AnyField& Y) {
    Regularity reg{X.regularity().analytic && Y.regularity().analytic, X.regularity().c2 && Y.regularity().c2};
    return AnyField([=](Vec2 p) { return a * X(p) + b * Y(p); },
                    [=](Vec2 p) { return a * X.jacobian(p) + b * Y.jacobian(p); },
                    std::to_string(a) + "*" + X.label() + " + " + std::to_string(b) + "*" + Y.label(), reg);
}

/// X + c for a constant vector c.
inline AnyField shifted(const AnyField& X, Vec2 c) {
    return AnyField([=](Vec2 p) { return X(p) + c; }, [=](Vec2 p) { return X.jacobian(p); },
                    X.label() + " + const", X.regularity());
}

/// The field of an affine map p -> A p + b as a vector field.
inline AnyField linear_field(Mat2 A, Vec2 b = {}) {
    return AnyField([=](Vec2 p) { return A * p + b; }, [=](Vec2) { return A; }, "linear", {true, true});
}

}  // namespace vfindex
