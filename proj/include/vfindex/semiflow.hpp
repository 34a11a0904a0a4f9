#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vfindex/field.hpp"
#include "vfindex/surface.hpp"

namespace vfindex {

enum class Method { rk4_fixed, rk45_adaptive };
enum class BoundaryPolicy { project, reject };
enum class Termination { time_reached, left_surface, step_underflow, blowup };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::time_reached: return "time_reached";
        case Termination::left_surface: return "left_surface";
        case Termination::step_underflow: return "step_underflow";
        case Termination::blowup: return "blowup";
    }
    return "";
}

struct FlowConfig {
    Method method = Method::rk45_adaptive;
    double step = 1e-3;  // fixed step, or the first trial step of rk45
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double min_step = 1e-13;
    double max_step = 0.25;
    BoundaryPolicy boundary = BoundaryPolicy::project;
    std::size_t max_steps = 5'000'000;
    bool record = true;  // keep every accepted step, not just the endpoints

    void validate() const {
        if (!(step > 0.0) || !(min_step > 0.0) || !(max_step > 0.0)) throw std::invalid_argument("flow step sizes must be positive");
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw std::invalid_argument("flow tolerances must be positive");
    }
};

struct Trajectory {
    Vec2 initial;
    std::vector<double> t;
    std::vector<Vec2> p;
    Termination reason = Termination::time_reached;

    Vec2 end() const { return p.back(); }
    double end_time() const { return t.back(); }
    bool complete() const { return reason == Termination::time_reached; }
};

class FlowError : public std::runtime_error {
public:
    FlowError(Termination r, Vec2 at)
        : std::runtime_error(std::string("flow terminated early: ") + to_string(r)), reason(r), where(at) {}
    Termination reason;
    Vec2 where;
};

namespace detail {

inline constexpr double kBlowup = 1e12;

template <PlanarField F>
Vec2 rk4_step(const F& X, Vec2 y, double h) {
    const Vec2 k1 = X(y);
    const Vec2 k2 = X(y + 0.5 * h * k1);
    const Vec2 k3 = X(y + 0.5 * h * k2);
    const Vec2 k4 = X(y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Dormand-Prince 5(4); returns the 5th-order solution and the error estimate.
template <PlanarField F>
Vec2 dopri_step(const F& X, Vec2 y, double h, Vec2& err) {
    static constexpr double a21 = 1.0 / 5, a31 = 3.0 / 40, a32 = 9.0 / 40, a41 = 44.0 / 45,
                            a42 = -56.0 / 15, a43 = 32.0 / 9, a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729, a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176, a65 = -5103.0 / 18656, b1 = 35.0 / 384,
                            b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84,
                            e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    const Vec2 k1 = X(y);
    const Vec2 k2 = X(y + h * (a21 * k1));
    const Vec2 k3 = X(y + h * (a31 * k1 + a32 * k2));
    const Vec2 k4 = X(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec2 k5 = X(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec2 k6 = X(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vec2 y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec2 k7 = X(y5);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return y5;
}

inline bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

}  // namespace detail

/// Integrates dy/dt = X(y) from p over [0, t]. `observe(t0, y0, t1, y1)` is
/// called after every accepted step and may return false to stop early.
template <PlanarField F, class Observer>
Trajectory integrate(const F& X, const Surface& S, Vec2 p, double t, const FlowConfig& cfg, Observer&& observe) {
    cfg.validate();
    if (!(t >= 0.0)) throw std::invalid_argument("flow time must be nonnegative");
    Trajectory tr;
    tr.initial = p;
    tr.t.push_back(0.0);
    tr.p.push_back(p);
    const double tol = cfg.abs_tol;
    double now = 0.0;
    Vec2 y = p;
    double h = cfg.method == Method::rk4_fixed ? cfg.step : std::min(cfg.step, cfg.max_step);
    std::size_t steps = 0;
    auto push = [&](double tt, Vec2 yy) {
        if (cfg.record || tr.t.size() < 2) {
            tr.t.push_back(tt);
            tr.p.push_back(yy);
        } else {
            tr.t.back() = tt;
            tr.p.back() = yy;
        }
    };
    while (now < t) {
        if (++steps > cfg.max_steps) {
            tr.reason = Termination::step_underflow;
            return tr;
        }
        const double remaining = t - now;
        double hs = std::min(h, remaining);
        bool last = hs == remaining;
        Vec2 y_new;
        if (cfg.method == Method::rk4_fixed) {
            y_new = detail::rk4_step(X, y, hs);
        } else {
            Vec2 err;
            y_new = detail::dopri_step(X, y, hs, err);
            const double sx = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y.x), std::abs(y_new.x));
            const double sy = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y.y), std::abs(y_new.y));
            const double e = std::max(std::abs(err.x) / sx, std::abs(err.y) / sy);
            if (!std::isfinite(e) || e > 1.0) {
                const double shrink = std::isfinite(e) ? std::max(0.2, 0.9 * std::pow(e, -0.2)) : 0.2;
                h = hs * shrink;
                if (h < cfg.min_step) {
                    tr.reason = Termination::step_underflow;
                    return tr;
                }
                continue;
            }
            h = std::min(cfg.max_step, hs * (e == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0)));
        }
        if (!detail::finite(y_new) || norm(y_new) > detail::kBlowup) {
            push(now + hs, y_new);
            tr.reason = Termination::blowup;
            return tr;
        }
        if (!S.contains(y_new)) {
            if (cfg.boundary == BoundaryPolicy::reject) {
                push(now + hs, y_new);
                tr.reason = Termination::left_surface;
                return tr;
            }
            const double excursion = S.distance(y_new);
            const bool sliding = S.boundary_distance(y) <= kBoundaryTol && !S.inward_cone_test(S.project(y), X(y));
            if (excursion > 10.0 * tol && !sliding) {
                h = 0.5 * hs;
                if (h < cfg.min_step) {
                    tr.reason = Termination::step_underflow;
                    return tr;
                }
                continue;
            }
            y_new = S.project(y_new);
        }
        const double t_new = last ? t : now + hs;
        const bool go_on = observe(now, y, t_new, y_new);
        now = t_new;
        y = y_new;
        push(now, y);
        if (cfg.method == Method::rk4_fixed) h = cfg.step;
        if (!go_on) break;
    }
    return tr;
}

template <PlanarField F>
Trajectory flow(const F& X, const Surface& S, Vec2 p, double t, const FlowConfig& cfg = {}) {
    return integrate(X, S, p, t, cfg, [](double, Vec2, double, Vec2) { return true; });
}

/// Endpoint of the flow; throws FlowError unless the full time was reached.
template <PlanarField F>
Vec2 flow_to(const F& X, const Surface& S, Vec2 p, double t, FlowConfig cfg = {}) {
    cfg.record = false;
    Trajectory tr = flow(X, S, p, t, cfg);
    if (!tr.complete()) throw FlowError(tr.reason, tr.end());
    return tr.end();
}

/// Jacobian of the time-t map by central differences, h = 1e-5 (1 + |p|),
/// over fixed-step RK4 so both stencil orbits share one step sequence.
template <PlanarField F>
Mat2 flow_jacobian(const F& X, const Surface& S, Vec2 p, double t, double rk4_step = 1e-3) {
    FlowConfig cfg;
    cfg.method = Method::rk4_fixed;
    cfg.step = rk4_step;
    cfg.record = false;
    const double h = 1e-5 * (1.0 + norm(p));
    auto phi = [&](Vec2 q) { return flow_to(X, S, q, t, cfg); };
    const Vec2 dx = (phi(p + Vec2{h, 0}) - phi(p - Vec2{h, 0})) / (2.0 * h);
    const Vec2 dy = (phi(p + Vec2{0, h}) - phi(p - Vec2{0, h})) / (2.0 * h);
    return {dx.x, dy.x, dx.y, dy.y};
}

/// (f_{t/k} o g_{t/k})^k (p): the Y-flow g is applied first, then the X-flow f.
template <PlanarField F, PlanarField G>
Vec2 nelson_compose(const F& X, const G& Y, const Surface& S, Vec2 p, double t, int k, const FlowConfig& cfg = {}) {
    if (k < 1) throw std::invalid_argument("nelson_compose needs k >= 1");
    const double dt = t / k;
    for (int i = 0; i < k; ++i) {
        p = flow_to(Y, S, p, dt, cfg);
        p = flow_to(X, S, p, dt, cfg);
    }
    return p;
}

struct InvarianceViolation {
    Vec2 sample;
    double time = 0.0;
    double distance = 0.0;
};

struct InvarianceReport {
    std::vector<InvarianceViolation> violations;
    std::vector<std::string> failures;  // integration problems, one line per sample
    double max_distance = 0.0;
};

/// Flows each sample of L to t_max and reports excursions farther than tol
/// from L, measured by the distance function `dist_to_L`.
template <PlanarField F>
InvarianceReport check_positive_invariance(const std::function<double(Vec2)>& dist_to_L, const F& Y, const Surface& S,
                                           const std::vector<Vec2>& samples, double t_max, const FlowConfig& cfg = {},
                                           double tol = 1e-6) {
    InvarianceReport rep;
    for (Vec2 s : samples) {
        Trajectory tr = flow(Y, S, s, t_max, cfg);
        if (!tr.complete()) rep.failures.push_back(std::string("sample terminated: ") + to_string(tr.reason));
        InvarianceViolation worst{s, 0.0, 0.0};
        for (std::size_t i = 0; i < tr.p.size(); ++i) {
            const double d = dist_to_L(tr.p[i]);
            if (d > worst.distance) worst = {s, tr.t[i], d};
        }
        rep.max_distance = std::max(rep.max_distance, worst.distance);
        if (worst.distance > tol) rep.violations.push_back(worst);
    }
    return rep;
}

struct PermuteSample {
    Vec2 p;
    Vec2 q;             // Phi^Y_t(p)
    double c = 0.0;     // T Phi X_p = c X_q
    double residual = 0.0;  // |sin| of the angle between T Phi X_p and X_q
};

struct PermuteReport {
    std::vector<PermuteSample> samples;
    double max_residual = 0.0;
    double min_c = INFINITY;
};

/// Checks that the Y-flow maps X-orbits to X-orbits: the pushed vector
/// DPhi^Y_t(p) X_p must be a positive multiple of X at Phi^Y_t(p).
template <PlanarField F, PlanarField G>
PermuteReport check_permutes_integral_curves(const F& X, const G& Y, const Surface& S, const std::vector<Vec2>& samples,
                                             double t, const FlowConfig& cfg = {}) {
    PermuteReport rep;
    for (Vec2 p : samples) {
        if (norm(Vec2(X(p))) < 1e-8) throw std::invalid_argument("sample too close to a zero of X");
        PermuteSample s;
        s.p = p;
        s.q = flow_to(Y, S, p, t, cfg);
        const Vec2 v = flow_jacobian(Y, S, p, t) * Vec2(X(p));
        const Vec2 w = X(s.q);
        const double nv = norm(v), nw = norm(w);
        if (nv == 0.0 || nw == 0.0) throw std::domain_error("X vanishes along the flowed sample");
        s.residual = std::abs(cross(v, w)) / (nv * nw);
        s.c = dot(v, w) / (nw * nw);
        rep.max_residual = std::max(rep.max_residual, s.residual);
        rep.min_c = std::min(rep.min_c, s.c);
        rep.samples.push_back(s);
    }
    return rep;
}

/// CSV rows "t,x,y" with a header line.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
    os << "t,x,y\n";
    os.precision(17);
    for (std::size_t i = 0; i < tr.t.size(); ++i) os << tr.t[i] << ',' << tr.p[i].x << ',' << tr.p[i].y << '\n';
}

}  // namespace vfindex
