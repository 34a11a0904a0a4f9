#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "vfindex/field.hpp"
#include "vfindex/surface.hpp"

namespace vfindex {

/// [X,Y] = DY.X - DX.Y. Exact canonical polynomials when both inputs are
/// polynomial with exact coefficients, otherwise the symbolic tree.
inline FieldExpr lie_bracket(const FieldExpr& X, const FieldExpr& Y) {
    if (auto px = X.polynomials()) {
        if (auto py = Y.polynomials()) {
            std::array<Polynomial, 2> out;
            for (int i = 0; i < 2; ++i) {
                Polynomial acc;
                for (int j = 0; j < 2; ++j) {
                    acc = acc + (*py)[i].derivative(j) * (*px)[j];
                    acc = acc - (*px)[i].derivative(j) * (*py)[j];
                }
                out[i] = acc;
            }
            return FieldExpr::from_polynomials(out[0], out[1]);
        }
    }
    std::array<ScalarExpr, 2> out{ScalarExpr::constant(0), ScalarExpr::constant(0)};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out[i] = out[i] + Y.partial(i, j) * X.component(j) - X.partial(i, j) * Y.component(j);
    return {out[0], out[1]};
}

/// X1*Y2 - X2*Y1.
inline ScalarExpr wedge(const FieldExpr& X, const FieldExpr& Y) {
    if (auto px = X.polynomials())
        if (auto py = Y.polynomials()) return ((*px)[0] * (*py)[1] - (*px)[1] * (*py)[0]).to_expr();
    return X.component(0) * Y.component(1) - X.component(1) * Y.component(0);
}

/// Pointwise bracket from Jacobians; works for any differentiable field.
template <PlanarField F, PlanarField G>
Vec2 lie_bracket_at(const F& X, const G& Y, Vec2 p) {
    return Mat2(Y.jacobian(p)) * Vec2(X(p)) - Mat2(X.jacobian(p)) * Vec2(Y(p));
}

struct BracketVerdict {
    bool holds = true;
    bool exact = false;  // decided by coefficient comparison
    Vec2 witness;
    double residual = 0.0;  // max |[X,Y] ^ X| over the samples (0 when exact and holding)
    std::size_t samples = 0;
};

namespace detail {

/// Cell centres of a uniform n x n grid over the bounding box that lie in S.
inline std::vector<Vec2> surface_grid(const Surface& S, int n = 64) {
    const Box& b = S.bounding_box();
    std::vector<Vec2> pts;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const Vec2 p{b.lo.x + (i + 0.5) * b.width() / n, b.lo.y + (j + 0.5) * b.height() / n};
            if (S.contains(p)) pts.push_back(p);
        }
    }
    return pts;
}

template <class Residual>
BracketVerdict sample_bracket(const Surface& S, double tol, Residual&& res) {
    BracketVerdict v;
    for (Vec2 p : surface_grid(S)) {
        const double r = std::abs(res(p));
        ++v.samples;
        if (r > v.residual || v.samples == 1) {
            v.residual = r;
            v.witness = p;
        }
    }
    v.holds = v.residual <= tol;
    return v;
}

}  // namespace detail

/// Decides [X,Y] ^ X == 0 on S.
inline BracketVerdict check_bracket_condition(const FieldExpr& X, const FieldExpr& Y, const Surface& S,
                                              double tol = 1e-8) {
    const FieldExpr B = lie_bracket(X, Y);
    const ScalarExpr w = wedge(B, X);
    if (auto pw = to_polynomial(w); pw && X.polynomials() && Y.polynomials()) {
        if (pw->is_zero()) {
            BracketVerdict v;
            v.exact = true;
            return v;
        }
        BracketVerdict v = detail::sample_bracket(S, tol, [&](Vec2 p) { return pw->eval(p); });
        v.exact = true;
        v.holds = false;
        return v;
    }
    return detail::sample_bracket(S, tol, [&](Vec2 p) { return w.eval(p); });
}

inline BracketVerdict check_bracket_condition(const AnyField& X, const AnyField& Y, const Surface& S,
                                              double tol = 1e-8) {
    if (X.expr() && Y.expr()) return check_bracket_condition(*X.expr(), *Y.expr(), S, tol);
    return detail::sample_bracket(S, tol, [&](Vec2 p) { return cross(lie_bracket_at(X, Y, p), X(p)); });
}

}  // namespace vfindex
