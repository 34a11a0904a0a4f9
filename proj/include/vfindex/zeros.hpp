#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "vfindex/field.hpp"
#include "vfindex/grid.hpp"
#include "vfindex/surface.hpp"

namespace vfindex {

struct ZeroScan {
    Grid grid;
    std::vector<Vec2> zeros;          // Newton-polished isolated zeros, in cell order
    std::vector<Cell> zero_cells;     // every cell flagged as meeting the zero set
    std::vector<Cell> suspect_cells;  // flagged cells not explained by a polished zero
};

struct NewtonOptions {
    int max_iterations = 100;
    double residual_tol = 1e-9;
};

/// Newton iteration for X(p) = 0; nullopt when the Jacobian is singular,
/// the iterate wanders off or the residual stays large.
template <PlanarField F>
std::optional<Vec2> newton_polish(const F& X, Vec2 p, double max_travel, NewtonOptions opt = {}) {
    const Vec2 start = p;
    for (int it = 0; it < opt.max_iterations; ++it) {
        const Vec2 v = X(p);
        if (v.x == 0.0 && v.y == 0.0) break;
        Vec2 step;
        if (!solve(Mat2(X.jacobian(p)), v, step)) return std::nullopt;
        p = p - step;
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || distance(p, start) > max_travel) return std::nullopt;
        if (norm(step) < 1e-15 * (1.0 + norm(p))) break;
    }
    // Degenerate zeros converge only linearly, so acceptance rests on the residual.
    if (norm(Vec2(X(p))) > opt.residual_tol) return std::nullopt;
    return p;
}

namespace detail {

inline bool straddles(double lo, double hi) { return lo <= 0.0 && hi >= 0.0; }

}  // namespace detail

/// Grid scan for zeros of X over `box` (resolution cells across its larger
/// side, padded by `pad` cells). With a surface, only cells meeting S are
/// considered, samples are projected onto S and zeros outside S dropped.
template <PlanarField F>
ZeroScan scan_zeros(const F& X, const Box& box, int resolution, int pad, const Surface* S) {
    ZeroScan out;
    const Grid g = Grid::covering(box, resolution, pad);
    out.grid = g;
    const int sx = 2 * g.nx + 1, sy = 2 * g.ny + 1;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<Vec2> val(static_cast<std::size_t>(sx) * static_cast<std::size_t>(sy), Vec2{nan, nan});
    auto at = [&](int i, int j) -> Vec2& { return val[static_cast<std::size_t>(j) * static_cast<std::size_t>(sx) + static_cast<std::size_t>(i)]; };
    auto cell_live = [&](Cell c) { return !S || S->distance(g.center(c)) <= g.half_diagonal() + kBoundaryTol; };

    std::vector<char> need(val.size(), 0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const Cell c = g.cell_at(k);
        if (!cell_live(c)) continue;
        for (int dj = 0; dj <= 2; ++dj)
            for (int di = 0; di <= 2; ++di)
                need[static_cast<std::size_t>(2 * c.j + dj) * static_cast<std::size_t>(sx) + static_cast<std::size_t>(2 * c.i + di)] = 1;
    }
    for (int j = 0; j < sy; ++j) {
        for (int i = 0; i < sx; ++i) {
            if (!need[static_cast<std::size_t>(j) * static_cast<std::size_t>(sx) + static_cast<std::size_t>(i)]) continue;
            Vec2 q = g.origin + 0.5 * g.h * Vec2{static_cast<double>(i), static_cast<double>(j)};
            if (S) q = S->project(q);
            try {
                at(i, j) = X(q);
            } catch (const EvalDomainError&) {
            }
        }
    }

    CellMask mask(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const Cell c = g.cell_at(k);
        if (!cell_live(c)) continue;
        double lx = INFINITY, hx = -INFINITY, ly = INFINITY, hy = -INFINITY;
        bool ok = true;
        for (int dj = 0; dj <= 2 && ok; ++dj) {
            for (int di = 0; di <= 2; ++di) {
                const Vec2 v = at(2 * c.i + di, 2 * c.j + dj);
                if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
                    ok = false;
                    break;
                }
                lx = std::min(lx, v.x), hx = std::max(hx, v.x);
                ly = std::min(ly, v.y), hy = std::max(hy, v.y);
            }
        }
        if (!ok) continue;
        bool hit = detail::straddles(lx, hx) && detail::straddles(ly, hy);
        if (!hit) {
            const Vec2 ctr = g.center(c);
            if (!S || S->contains(ctr)) {
                Vec2 step;
                if (solve(Mat2(X.jacobian(ctr)), at(2 * c.i + 1, 2 * c.j + 1), step))
                    hit = std::abs(step.x) <= 0.5 * g.h && std::abs(step.y) <= 0.5 * g.h;
            }
        }
        if (hit) mask.set(c);
    }

    out.zero_cells = mask.cells();
    constexpr std::size_t kPolishLimit = 64;  // larger components are treated as curve-like
    for (const auto& comp : mask.components()) {
        std::vector<Vec2> found;
        if (comp.size() <= kPolishLimit) {
            for (Cell c : comp) {
                auto z = newton_polish(X, g.center(c), 3.0 * g.h);
                if (!z) continue;
                const Cell zc = g.locate(*z);
                bool near_comp = false;
                for (Cell m : comp)
                    if (std::abs(m.i - zc.i) <= 1 && std::abs(m.j - zc.j) <= 1) near_comp = true;
                if (!near_comp) continue;
                if (S && !S->contains(*z)) continue;
                bool dup = false;
                for (Vec2 f : found)
                    if (distance(f, *z) < 0.25 * g.h) dup = true;
                if (!dup) found.push_back(*z);
            }
        }
        bool explained = !found.empty();
        for (Cell m : comp) {
            bool close = false;
            for (Vec2 f : found) {
                const Cell zc = g.locate(f);
                if (std::abs(m.i - zc.i) <= 2 && std::abs(m.j - zc.j) <= 2) close = true;
            }
            if (!close) explained = false;
        }
        if (explained) {
            out.zeros.insert(out.zeros.end(), found.begin(), found.end());
        } else {
            out.suspect_cells.insert(out.suspect_cells.end(), comp.begin(), comp.end());
        }
    }
    auto by_cell = [&](Cell a, Cell b) { return g.index(a) < g.index(b); };
    std::sort(out.suspect_cells.begin(), out.suspect_cells.end(), by_cell);
    return out;
}

}  // namespace vfindex
