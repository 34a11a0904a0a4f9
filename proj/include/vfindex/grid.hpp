#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "vfindex/curve.hpp"

namespace vfindex {

struct Cell {
    int i = 0;  // column, x direction
    int j = 0;  // row, y direction
    friend constexpr bool operator==(Cell, Cell) = default;
    friend constexpr auto operator<=>(Cell, Cell) = default;
};

/// Uniform axis-aligned grid of square cells.
struct Grid {
    Vec2 origin;
    double h = 1.0;
    int nx = 0;
    int ny = 0;

    /// Cells of size extent/resolution covering the box, padded by `pad`
    /// cells on every side.
    static Grid covering(const Box& box, int resolution, int pad) {
        if (resolution < 1) throw std::invalid_argument("grid resolution must be positive");
        Grid g;
        g.h = box.extent() / resolution;
        const int cx = static_cast<int>(std::ceil(box.width() / g.h - 1e-9));
        const int cy = static_cast<int>(std::ceil(box.height() / g.h - 1e-9));
        g.nx = std::max(cx, 1) + 2 * pad;
        g.ny = std::max(cy, 1) + 2 * pad;
        const Vec2 mid = 0.5 * (box.lo + box.hi);
        g.origin = mid - 0.5 * g.h * Vec2{static_cast<double>(g.nx), static_cast<double>(g.ny)};
        return g;
    }

    bool valid(Cell c) const { return c.i >= 0 && c.j >= 0 && c.i < nx && c.j < ny; }
    std::size_t index(Cell c) const { return static_cast<std::size_t>(c.j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(c.i); }
    Cell cell_at(std::size_t idx) const {
        return {static_cast<int>(idx % static_cast<std::size_t>(nx)), static_cast<int>(idx / static_cast<std::size_t>(nx))};
    }
    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }

    Vec2 node(int i, int j) const { return origin + h * Vec2{static_cast<double>(i), static_cast<double>(j)}; }
    Vec2 center(Cell c) const { return node(c.i, c.j) + Vec2{0.5 * h, 0.5 * h}; }
    double half_diagonal() const { return h * std::sqrt(0.5); }

    Cell locate(Vec2 p) const {
        return {static_cast<int>(std::floor((p.x - origin.x) / h)), static_cast<int>(std::floor((p.y - origin.y) / h))};
    }
};

/// Set of grid cells with morphology, component labelling and boundary
/// contour extraction.
class CellMask {
public:
    CellMask() = default;
    explicit CellMask(Grid g) : grid_(g), bits_(g.size(), 0) {}

    const Grid& grid() const { return grid_; }

    bool test(Cell c) const { return grid_.valid(c) && bits_[grid_.index(c)] != 0; }
    void set(Cell c, bool on = true) {
        if (grid_.valid(c)) bits_[grid_.index(c)] = on ? 1 : 0;
    }

    std::size_t count() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1)); }
    bool empty() const { return count() == 0; }

    std::vector<Cell> cells() const {
        std::vector<Cell> out;
        for (std::size_t k = 0; k < bits_.size(); ++k)
            if (bits_[k]) out.push_back(grid_.cell_at(k));
        return out;
    }

    bool intersects(const CellMask& o) const {
        for (std::size_t k = 0; k < bits_.size(); ++k)
            if (bits_[k] && o.bits_[k]) return true;
        return false;
    }

    void merge(const CellMask& o) {
        for (std::size_t k = 0; k < bits_.size(); ++k) bits_[k] = static_cast<std::uint8_t>(bits_[k] | o.bits_[k]);
    }

    /// Chebyshev dilation by r cells (square structuring element).
    CellMask dilated(int r) const {
        CellMask out(grid_);
        for (std::size_t k = 0; k < bits_.size(); ++k) {
            if (!bits_[k]) continue;
            const Cell c = grid_.cell_at(k);
            for (int dj = -r; dj <= r; ++dj)
                for (int di = -r; di <= r; ++di) out.set({c.i + di, c.j + dj});
        }
        return out;
    }

    /// 8-connected components, each sorted in cell order; components are
    /// ordered by their first cell.
    std::vector<std::vector<Cell>> components() const {
        std::vector<int> label(bits_.size(), -1);
        std::vector<std::vector<Cell>> comps;
        for (std::size_t k = 0; k < bits_.size(); ++k) {
            if (!bits_[k] || label[k] >= 0) continue;
            const int id = static_cast<int>(comps.size());
            comps.emplace_back();
            std::queue<std::size_t> q;
            q.push(k);
            label[k] = id;
            while (!q.empty()) {
                const std::size_t cur = q.front();
                q.pop();
                const Cell c = grid_.cell_at(cur);
                comps.back().push_back(c);
                for (int dj = -1; dj <= 1; ++dj) {
                    for (int di = -1; di <= 1; ++di) {
                        const Cell n{c.i + di, c.j + dj};
                        if (!grid_.valid(n)) continue;
                        const std::size_t ni = grid_.index(n);
                        if (bits_[ni] && label[ni] < 0) {
                            label[ni] = id;
                            q.push(ni);
                        }
                    }
                }
            }
            std::sort(comps.back().begin(), comps.back().end(),
                      [&](Cell a, Cell b) { return grid_.index(a) < grid_.index(b); });
        }
        return comps;
    }

    /// Boundary loops of the union of cells, with the region on the left:
    /// outer loops counter-clockwise, holes clockwise. Collinear runs are
    /// merged into single segments.
    std::vector<Curve> boundary_loops() const {
        using Node = std::pair<int, int>;
        std::multimap<Node, Node> edges;  // start -> end
        for (std::size_t k = 0; k < bits_.size(); ++k) {
            if (!bits_[k]) continue;
            const Cell c = grid_.cell_at(k);
            const int i = c.i, j = c.j;
            if (!test({i, j - 1})) edges.emplace(Node{i, j}, Node{i + 1, j});
            if (!test({i + 1, j})) edges.emplace(Node{i + 1, j}, Node{i + 1, j + 1});
            if (!test({i, j + 1})) edges.emplace(Node{i + 1, j + 1}, Node{i, j + 1});
            if (!test({i - 1, j})) edges.emplace(Node{i, j + 1}, Node{i, j});
        }
        std::vector<Curve> loops;
        while (!edges.empty()) {
            auto it = edges.begin();
            const Node start = it->first;
            Node prev = it->first;
            Node cur = it->second;
            edges.erase(it);
            std::vector<Node> pts{start};
            while (cur != start) {
                pts.push_back(cur);
                auto [lo, hi] = edges.equal_range(cur);
                if (lo == hi) throw std::logic_error("open boundary chain in cell mask");
                auto chosen = lo;
                if (std::next(lo) != hi) {
                    // Pinch vertex: take the left turn so that diagonal
                    // neighbours stay on separate loops.
                    const int dx = cur.first - prev.first, dy = cur.second - prev.second;
                    for (auto e = lo; e != hi; ++e) {
                        const int ex = e->second.first - cur.first, ey = e->second.second - cur.second;
                        if (dx * ey - dy * ex > 0) chosen = e;
                    }
                }
                prev = cur;
                cur = chosen->second;
                edges.erase(chosen);
            }
            Curve loop;
            const std::size_t n = pts.size();
            for (std::size_t k = 0; k < n; ++k) {
                const Node a = pts[(k + n - 1) % n], b = pts[k], c = pts[(k + 1) % n];
                const int cr = (b.first - a.first) * (c.second - b.second) - (b.second - a.second) * (c.first - b.first);
                if (cr != 0) loop.vertices.push_back(grid_.node(b.first, b.second));
            }
            loops.push_back(std::move(loop));
        }
        return loops;
    }

private:
    Grid grid_;
    std::vector<std::uint8_t> bits_;
};

}  // namespace vfindex
