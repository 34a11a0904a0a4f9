#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "vfindex/field.hpp"

namespace vfindex {

namespace detail {

// Forward-mode value with gradient in (x, y).
struct Dual {
    double v = 0.0, dx = 0.0, dy = 0.0;

    friend Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.dx + b.dx, a.dy + b.dy}; }
    friend Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.dx - b.dx, a.dy - b.dy}; }
    friend Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.dx * b.v + a.v * b.dx, a.dy * b.v + a.v * b.dy}; }
    friend Dual operator*(double s, Dual a) { return {s * a.v, s * a.dx, s * a.dy}; }
};

inline Dual chain(Dual a, double f, double df) { return {f, df * a.dx, df * a.dy}; }
inline Dual cos(Dual a) { return chain(a, std::cos(a.v), -std::sin(a.v)); }
inline Dual sin(Dual a) { return chain(a, std::sin(a.v), std::cos(a.v)); }
inline Dual log(Dual a) { return chain(a, std::log(a.v), 1.0 / a.v); }
inline Dual pow(Dual a, double e) { return chain(a, std::pow(a.v, e), e * std::pow(a.v, e - 1.0)); }

}  // namespace detail

/// Push-forward of the constant field (1,0) to the open unit disk under the
/// twisted compactification, damped by (1 - r^2)^steepness and extended by 0
/// for r >= 1. With u = 1 - r^2, a = (w/2) ln u, c = cos a, s = sin a:
///   X = u^(steepness + 1/2) [(c, -s) - (c x - s y) q + w (c x - s y) J q].
class LimaX {
public:
    LimaX(double steepness, double twist) : k_(steepness), w_(twist) {}

    Vec2 operator()(Vec2 p) const {
        const auto [fx, fy] = eval({p.x, 1.0, 0.0}, {p.y, 0.0, 1.0});
        return {fx.v, fy.v};
    }

    Mat2 jacobian(Vec2 p) const {
        const auto [fx, fy] = eval({p.x, 1.0, 0.0}, {p.y, 0.0, 1.0});
        return {fx.dx, fx.dy, fy.dx, fy.dy};
    }

    double steepness() const { return k_; }
    double twist() const { return w_; }

private:
    double k_;
    double w_;

    std::pair<detail::Dual, detail::Dual> eval(detail::Dual x, detail::Dual y) const {
        using detail::Dual;
        const Dual u = Dual{1.0, 0.0, 0.0} - (x * x + y * y);
        if (u.v <= 0.0) return {Dual{}, Dual{}};
        const Dual a = (0.5 * w_) * detail::log(u);
        const Dual c = detail::cos(a), s = detail::sin(a);
        const Dual m = c * x - s * y;
        const Dual amp = detail::pow(u, k_ + 0.5);
        const Dual bx = c - m * x - w_ * (m * y);
        const Dual by = Dual{0.0, 0.0, 0.0} - s - m * y + w_ * (m * x);
        return {amp * bx, amp * by};
    }
};

struct LimaPair {
    AnyField X;
    FieldExpr Y;  // (1 - r^2) q + w r^2 J q, polynomial
    double steepness = 1.0;
    double twist = 1.0;
};

/// Planar pair X1 = (1,0), Y1 = (x,y) (with [X1,Y1] = X1) transferred to the
/// closed unit disk; Z X is the boundary circle and Z Y the origin.
inline LimaPair build_lima_pair(double steepness, double twist = 1.0) {
    if (!(steepness > 0.0)) throw std::invalid_argument("steepness must be positive");
    if (!std::isfinite(twist)) throw std::invalid_argument("twist must be finite");
    LimaPair lp;
    lp.steepness = steepness;
    lp.twist = twist;
    lp.X = AnyField(LimaX(steepness, twist), "lima_X(steepness=" + detail::double_to_string(steepness) + ")",
                    Regularity{false, steepness >= 1.5});
    const ScalarExpr x = ScalarExpr::x(), y = ScalarExpr::y();
    const ScalarExpr u = ScalarExpr::constant(1) - (x * x + y * y);
    const ScalarExpr r2w = ScalarExpr::constant(Rational(twist)) * (x * x + y * y);
    lp.Y = FieldExpr(u * x - r2w * y, u * y + r2w * x);
    return lp;
}

}  // namespace vfindex
