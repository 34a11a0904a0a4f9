#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "vfindex/runner.hpp"

namespace vfindex {

inline const std::vector<std::string>& export_sections() {
    static const std::vector<std::string> s{"contours", "zero_cells", "dependency", "cycles", "orbits"};
    return s;
}

/// CSV text for one section. Empty results give a header-only table.
inline std::string export_csv(Runner& runner, const std::string& section) {
    std::ostringstream os;
    os.precision(17);
    auto cell_rows = [&](const Grid& g, const std::vector<Cell>& cells) {
        os << "i,j,x,y\n";
        for (Cell c : cells) {
            const Vec2 p = g.center(c);
            os << c.i << ',' << c.j << ',' << p.x << ',' << p.y << '\n';
        }
    };
    if (section == "contours") {
        os << "block,contour,vertex,x,y\n";
        const auto& bd = runner.blocks();
        for (std::size_t b = 0; b < bd.blocks.size(); ++b)
            for (std::size_t c = 0; c < bd.blocks[b].region.contours.size(); ++c) {
                // closed polyline: the first vertex is repeated at the end
                const auto& pts = bd.blocks[b].region.contours[c].vertices;
                for (std::size_t v = 0; v <= pts.size() && !pts.empty(); ++v) {
                    const Vec2 p = pts[v % pts.size()];
                    os << b << ',' << c << ',' << v << ',' << p.x << ',' << p.y << '\n';
                }
            }
    } else if (section == "zero_cells") {
        const ZeroScan& z = runner.zeros_x();
        cell_rows(z.grid, z.zero_cells);
    } else if (section == "dependency") {
        if (!runner.scenario().Y) throw ScenarioError("section 'dependency' needs Y");
        const DependencySet& d = runner.dependency();
        cell_rows(d.grid, d.cells);
    } else if (section == "cycles") {
        if (!runner.scenario().Y) throw ScenarioError("section 'cycles' needs Y");
        os << "cycle,vertex,x,y\n";
        const auto& cs = runner.cycles();
        for (std::size_t k = 0; k < cs.size(); ++k)
            for (std::size_t v = 0; v < cs[k].orbit.size(); ++v)
                os << k << ',' << v << ',' << cs[k].orbit[v].x << ',' << cs[k].orbit[v].y << '\n';
    } else if (section == "orbits") {
        if (!runner.scenario().Y) throw ScenarioError("section 'orbits' needs Y");
        os << "orbit,t,x,y\n";
        const auto trs = runner.orbits();
        for (std::size_t k = 0; k < trs.size(); ++k)
            for (std::size_t i = 0; i < trs[k].t.size(); ++i)
                os << k << ',' << trs[k].t[i] << ',' << trs[k].p[i].x << ',' << trs[k].p[i].y << '\n';
    } else {
        throw ScenarioError("unknown export section '" + section + "'");
    }
    return os.str();
}

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
inline void write_atomic(const std::filesystem::path& out, const std::string& text) {
    std::filesystem::path tmp = out;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        f << text;
        f.flush();
        if (!f) throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
    std::filesystem::rename(tmp, out);
}

}  // namespace vfindex
