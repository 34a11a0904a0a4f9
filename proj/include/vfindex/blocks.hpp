#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vfindex/algebra.hpp"
#include "vfindex/index.hpp"

namespace vfindex {

inline constexpr int kDefaultResolution = 256;

/// Zero scan of X over S; the grid is padded so that isolating regions can
/// be grown past the boundary of S.
template <PlanarField F>
ZeroScan find_zeros(const F& X, const Surface& S, int resolution = kDefaultResolution) {
    if (resolution < 16) throw std::invalid_argument("resolution must be at least 16");
    return scan_zeros(X, S.bounding_box(), resolution, 12, &S);
}

struct Block {
    std::vector<Cell> cells;   // zero cells
    std::vector<Vec2> zeros;   // polished zero points
    CellMask mask;             // isolating region as a cell set
    Region region;             // its contours
    IndexResult index;
    bool index_ok = true;
    std::string index_error;
    bool touches_boundary = false;
    bool merged = false;       // dilated regions of several components overlapped
    bool suspect = false;      // contains unpolished (curve-like) zero cells
    int dilation = 2;
};

struct BlockDecomposition {
    Grid grid;
    std::vector<Block> blocks;
    bool merge_reported = false;
};

namespace detail {

template <PlanarField F>
bool contour_zero_free(const F& X, const Surface& S, const Region& U) {
    try {
        check_isolating(X, S, U);
    } catch (const IndexError&) {
        return false;
    }
    return true;
}

}  // namespace detail

/// Blocks of Z X: components of the zero-cell set, each with an isolating
/// region grown by dilation and its vector-field index.
template <PlanarField F>
BlockDecomposition decompose_blocks(const F& X, const Surface& S, int resolution = kDefaultResolution,
                                    const IndexConfig& cfg = {}) {
    const ZeroScan scan = find_zeros(X, S, resolution);
    const Grid& g = scan.grid;
    BlockDecomposition out;
    out.grid = g;
    CellMask zero_mask(g);
    for (Cell c : scan.zero_cells) zero_mask.set(c);

    struct Part {
        std::vector<Cell> cells;
        CellMask grown;
        bool merged = false;
        int dilation = 2;
    };
    std::vector<Part> parts;
    for (auto& comp : zero_mask.components()) {
        CellMask m(g);
        for (Cell c : comp) m.set(c);
        parts.push_back({comp, m.dilated(2), false, 2});
    }
    // Grow each region until its contour is zero-free, merging on overlap.
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t a = 0; a < parts.size() && !changed; ++a) {
            for (std::size_t b = a + 1; b < parts.size() && !changed; ++b) {
                if (!parts[a].grown.intersects(parts[b].grown)) continue;
                parts[a].cells.insert(parts[a].cells.end(), parts[b].cells.begin(), parts[b].cells.end());
                parts[a].grown.merge(parts[b].grown);
                parts[a].merged = true;
                parts[a].dilation = std::max(parts[a].dilation, parts[b].dilation);
                parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(b));
                changed = true;
            }
        }
        for (auto& p : parts) {
            if (changed) break;
            Region r{p.grown.boundary_loops()};
            if (detail::contour_zero_free(X, S, r) || p.dilation >= 7) continue;
            p.grown = p.grown.dilated(1);
            ++p.dilation;
            changed = true;
        }
    }

    for (auto& p : parts) {
        Block b;
        std::sort(p.cells.begin(), p.cells.end(), [&](Cell u, Cell v) { return g.index(u) < g.index(v); });
        b.cells = p.cells;
        b.mask = p.grown;
        b.merged = p.merged;
        b.dilation = p.dilation;
        out.merge_reported = out.merge_reported || p.merged;
        for (Vec2 z : scan.zeros)
            if (b.mask.test(g.locate(z))) b.zeros.push_back(z);
        for (Cell c : scan.suspect_cells)
            if (std::binary_search(b.cells.begin(), b.cells.end(), c, [&](Cell u, Cell v) { return g.index(u) < g.index(v); }))
                b.suspect = true;
        for (Cell c : b.cells)
            if (S.boundary_distance(g.center(c)) <= g.half_diagonal()) b.touches_boundary = true;
        b.region = Region{b.mask.boundary_loops()};
        try {
            b.index = vector_field_index(X, S, b.region, cfg);
        } catch (const IndexError& e) {
            b.index_ok = false;
            b.index_error = e.what();
        }
        out.blocks.push_back(std::move(b));
    }
    return out;
}

struct DependencySet {
    Grid grid;
    std::vector<Cell> cells;
    std::vector<std::vector<Cell>> components;

    bool contains(Cell c) const {
        return std::find(cells.begin(), cells.end(), c) != cells.end();
    }
};

/// Cells of S where X ^ Y may vanish: a sign change of the wedge over the
/// 3x3 cell samples, or a second-order Taylor bound reaching zero, with
/// slack tol (1 + |X||Y|).
template <PlanarField F, PlanarField G>
DependencySet dependency_set(const F& X, const G& Y, const Surface& S, int resolution = kDefaultResolution,
                             double tol = 1e-7) {
    DependencySet out;
    const Grid g = Grid::covering(S.bounding_box(), resolution, 0);
    out.grid = g;
    CellMask mask(g);
    const double q = 0.5 * g.h;
    const double d = g.half_diagonal();
    for (std::size_t k = 0; k < g.size(); ++k) {
        const Cell c = g.cell_at(k);
        const Vec2 ctr = g.center(c);
        if (S.distance(ctr) > d + kBoundaryTol) continue;
        double w[3][3];
        double lo = INFINITY, hi = -INFINITY;
        for (int j = 0; j < 3; ++j) {
            for (int i = 0; i < 3; ++i) {
                const Vec2 p = S.project(ctr + q * Vec2{static_cast<double>(i - 1), static_cast<double>(j - 1)});
                w[j][i] = cross(Vec2(X(p)), Vec2(Y(p)));
                lo = std::min(lo, w[j][i]);
                hi = std::max(hi, w[j][i]);
            }
        }
        bool in = lo <= 0.0 && hi >= 0.0;
        if (!in) {
            const Vec2 xc = X(ctr), yc = Y(ctr);
            const double gx = (w[1][2] - w[1][0]) / (2 * q), gy = (w[2][1] - w[0][1]) / (2 * q);
            const double hxx = (w[1][2] - 2 * w[1][1] + w[1][0]) / (q * q);
            const double hyy = (w[2][1] - 2 * w[1][1] + w[0][1]) / (q * q);
            const double hxy = (w[2][2] - w[2][0] - w[0][2] + w[0][0]) / (4 * q * q);
            const double hess = std::sqrt(hxx * hxx + hyy * hyy + 2 * hxy * hxy);
            const double bound = std::hypot(gx, gy) * d + 0.5 * hess * d * d + tol * (1.0 + norm(xc) * norm(yc));
            in = std::abs(w[1][1]) <= bound;
        }
        if (in) mask.set(c);
    }
    out.cells = mask.cells();
    out.components = mask.components();
    return out;
}

struct ReturnSample {
    double s_in = 0.0;
    bool returned = false;
    double s_out = 0.0;
    double time = 0.0;
};

struct ReturnMap {
    Vec2 a, b;
    std::vector<ReturnSample> samples;

    bool any_returned() const {
        return std::any_of(samples.begin(), samples.end(), [](const ReturnSample& s) { return s.returned; });
    }
    double max_displacement() const {
        double m = 0.0;
        for (const auto& s : samples)
            if (s.returned) m = std::max(m, std::abs(s.s_out - s.s_in));
        return m;
    }
};

struct ReturnOptions {
    int samples = 20;
    double t_budget = 50.0;
};

struct FirstReturn {
    bool returned = false;
    double s = 0.0;
    double time = 0.0;
    Vec2 point;
};

/// First same-direction crossing of the segment [a,b] by the Y-orbit of
/// the point at arc length s, located by bisection in time.
template <PlanarField F>
FirstReturn first_return(const F& Y, const Surface& S, Vec2 a, Vec2 b, double s, const FlowConfig& cfg, double t_budget) {
    const double L = distance(a, b);
    const Vec2 dir = (b - a) / L;
    const Vec2 p0 = a + s * dir;
    const double side = cross(dir, Vec2(Y(p0))) > 0.0 ? 1.0 : -1.0;
    auto g = [&](Vec2 p) { return side * cross(dir, p - a); };
    FirstReturn fr;
    double t0 = 0.0, t1 = 0.0;
    Vec2 y0, y1;
    FlowConfig fc = cfg;
    fc.record = false;
    integrate(Y, S, p0, t_budget, fc, [&](double ta, Vec2 ya, double tb, Vec2 yb) {
        if (ta == 0.0) return true;  // leaving J
        if (g(ya) < 0.0 && g(yb) >= 0.0) {
            const Vec2 mid = 0.5 * (ya + yb);
            const double u = dot(mid - a, dir);
            if (u >= -0.05 * L && u <= 1.05 * L) {
                t0 = ta, t1 = tb, y0 = ya, y1 = yb;
                fr.returned = true;
                return false;
            }
        }
        return true;
    });
    if (!fr.returned) return fr;
    double lo = 0.0, hi = t1 - t0;
    Vec2 ylo = y0, yhi = y1;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + t0); ++it) {
        const double m = 0.5 * (lo + hi);
        const Vec2 ym = flow_to(Y, S, y0, m, fc);
        if (g(ym) < 0.0) lo = m, ylo = ym;
        else hi = m, yhi = ym;
    }
    // Linear interpolation of the crossing inside the final bracket.
    const double glo = g(ylo), ghi = g(yhi);
    const double f = ghi > glo ? -glo / (ghi - glo) : 0.5;
    fr.point = ylo + f * (yhi - ylo);
    fr.time = t0 + lo + f * (hi - lo);
    fr.s = dot(fr.point - a, dir);
    fr.returned = fr.s >= 0.0 && fr.s <= L;
    return fr;
}

/// Sampled first-return map on the transversal segment [a,b].
template <PlanarField F>
ReturnMap poincare_return_map(const F& Y, const Surface& S, Vec2 a, Vec2 b, const FlowConfig& cfg = {},
                              ReturnOptions opt = {}) {
    const double L = distance(a, b);
    if (!(L > 0.0)) throw std::invalid_argument("degenerate transversal");
    const Vec2 dir = (b - a) / L;
    for (int i = 0; i <= 4 * opt.samples; ++i) {
        const Vec2 p = a + (L * i / (4.0 * opt.samples)) * dir;
        if (std::abs(cross(Vec2(Y(p)), dir)) <= 1e-6)
            throw std::domain_error("field is not transverse to the segment");
    }
    ReturnMap rm{a, b, {}};
    for (int i = 0; i < opt.samples; ++i) {
        ReturnSample rs;
        rs.s_in = L * (i + 0.5) / opt.samples;
        const FirstReturn fr = first_return(Y, S, a, b, rs.s_in, cfg, opt.t_budget);
        rs.returned = fr.returned;
        rs.s_out = fr.s;
        rs.time = fr.time;
        rm.samples.push_back(rs);
    }
    return rm;
}

struct Cycle {
    std::vector<Vec2> orbit;  // one period, starting on the transversal
    double period = 0.0;
    Vec2 ta, tb;              // transversal segment
    double closure_gap = 0.0;
};

struct CycleOptions {
    double transient = 20.0;
    double recurrence_tol = 1e-4;
    double transversal_half_length = 0.1;
    int max_returns = 60;
    double t_budget = 50.0;
};

/// Flows each seed past a transient, iterates the first-return map on a
/// transversal through the orbit until near-recurrence, then polishes the
/// fixed point of the return map by secant steps.
template <PlanarField F>
std::vector<Cycle> detect_cycles(const F& Y, const Surface& S, const std::vector<Vec2>& seeds, const FlowConfig& cfg = {},
                                 CycleOptions opt = {}) {
    std::vector<Cycle> cycles;
    FlowConfig fc = cfg;
    fc.record = false;
    for (Vec2 seed : seeds) {
        Trajectory pre = flow(Y, S, seed, opt.transient, fc);
        if (!pre.complete()) continue;
        const Vec2 q = pre.end();
        const Vec2 v = Y(q);
        if (norm(v) < 1e-8) continue;
        const Vec2 n = perp(v) / norm(v);
        const Vec2 a = q - opt.transversal_half_length * n, b = q + opt.transversal_half_length * n;
        const double mid = opt.transversal_half_length;
        double s = mid;
        bool recurrent = false;
        for (int k = 0; k < opt.max_returns; ++k) {
            const FirstReturn fr = first_return(Y, S, a, b, s, fc, opt.t_budget);
            if (!fr.returned) break;
            const double gap = std::abs(fr.s - s);
            s = fr.s;
            if (gap < opt.recurrence_tol) {
                recurrent = true;
                break;
            }
        }
        if (!recurrent) continue;
        auto defect = [&](double u) -> std::optional<std::pair<double, double>> {
            const FirstReturn fr = first_return(Y, S, a, b, u, fc, opt.t_budget);
            if (!fr.returned) return std::nullopt;
            return std::make_pair(fr.s - u, fr.time);
        };
        auto d0 = defect(s);
        if (!d0) continue;
        double s_prev = s + 1e-6, s_cur = s;
        auto dp = defect(s_prev);
        double f_cur = d0->first;
        double period = d0->second;
        for (int it = 0; it < 40 && dp && std::abs(f_cur) > 1e-12; ++it) {
            const double denom = f_cur - dp->first;
            if (denom == 0.0) break;
            const double s_next = s_cur - f_cur * (s_cur - s_prev) / denom;
            auto dn = defect(s_next);
            if (!dn || std::abs(s_next - s_cur) > 10.0 * opt.recurrence_tol) break;
            s_prev = s_cur;
            dp = std::make_pair(f_cur, period);
            s_cur = s_next;
            f_cur = dn->first;
            period = dn->second;
        }
        const Vec2 start = a + s_cur * ((b - a) / distance(a, b));
        FlowConfig rec = cfg;
        rec.record = true;
        Trajectory orbit = flow(Y, S, start, period, rec);
        Cycle cy;
        cy.orbit = orbit.p;
        cy.period = period;
        cy.ta = a;
        cy.tb = b;
        cy.closure_gap = distance(orbit.end(), start);
        if (cy.closure_gap >= 1e-6 || !(period > 0.0)) continue;
        bool dup = false;
        for (const Cycle& other : cycles) {
            Curve c{other.orbit, true};
            if (c.distance_to(start) < opt.recurrence_tol) dup = true;
        }
        if (!dup) cycles.push_back(std::move(cy));
    }
    return cycles;
}

struct AreaReport {
    double divergence_max = 0.0;
    double jacobian_deviation_max = 0.0;
    bool preserving = false;
};

/// Divergence of Y over the 64x64 surface grid and |det DPhi_t - 1| at the
/// probe points; preserving iff both stay below 1e-6.
template <PlanarField F>
AreaReport is_area_preserving(const F& Y, const Surface& S, const std::vector<Vec2>& probes, double t) {
    AreaReport rep;
    for (Vec2 p : detail::surface_grid(S)) rep.divergence_max = std::max(rep.divergence_max, std::abs(Mat2(Y.jacobian(p)).trace()));
    for (Vec2 p : probes) {
        if (!S.contains(p)) throw std::invalid_argument("probe outside the surface");
        rep.jacobian_deviation_max = std::max(rep.jacobian_deviation_max, std::abs(flow_jacobian(Y, S, p, t).det() - 1.0));
    }
    rep.preserving = rep.divergence_max < 1e-6 && rep.jacobian_deviation_max < 1e-6;
    return rep;
}

}  // namespace vfindex
