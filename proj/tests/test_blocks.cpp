#include <catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "vfindex/blocks.hpp"
#include "vfindex/lima.hpp"

using namespace vfindex;
using Catch::Matchers::WithinAbs;

namespace {

const FieldExpr kHopf = parse_field("(x - y - x*(x^2 + y^2), x + y - y*(x^2 + y^2))");

int block_sum(const BlockDecomposition& d) {
    int s = 0;
    for (const Block& b : d.blocks) {
        REQUIRE(b.index_ok);
        s += b.index.value;
    }
    return s;
}

}  // namespace

TEST_CASE("zero scan examples") {
    const Surface W = Surface::rectangle({-2, -2}, {2, 2});
    const ZeroScan two = find_zeros(parse_field("(x^2 - 1, y)"), W, 64);
    REQUIRE(two.zeros.size() == 2);
    CHECK_THAT(two.zeros[0].x, WithinAbs(-1.0, 1e-9));
    CHECK_THAT(two.zeros[1].x, WithinAbs(1.0, 1e-9));
    CHECK(two.suspect_cells.empty());

    const ZeroScan none = find_zeros(parse_field("(1, x)"), W, 64);
    CHECK(none.zeros.empty());
    CHECK(none.zero_cells.empty());

    const ZeroScan ring = find_zeros(parse_field("(x^2 + y^2 - 1, 0)"), W, 64);
    CHECK_FALSE(ring.suspect_cells.empty());
}

TEST_CASE("zero scan validates its resolution") {
    CHECK_THROWS_AS(find_zeros(parse_field("(x, y)"), Surface::disk({0, 0}, 1), 8), std::invalid_argument);
}

TEST_CASE("polished zeros are zeros") {
    std::mt19937 rng(53);
    const Surface W = Surface::rectangle({-2, -2}, {2, 2});
    for (int trial = 0; trial < 10; ++trial) {
        const FieldExpr F = oracle::random_field(rng, 2);
        for (Vec2 z : find_zeros(F, W, 64).zeros) CHECK(norm(F(z)) < 1e-8);
    }
}

TEST_CASE("block decomposition of two hyperbolic zeros") {
    const Surface W = Surface::rectangle({-2, -2}, {2, 2});
    const BlockDecomposition d = decompose_blocks(parse_field("(x^2 - 1, y)"), W, 64);
    REQUIRE(d.blocks.size() == 2);
    CHECK(d.blocks[0].index.value == -1);
    CHECK(d.blocks[1].index.value == 1);
    CHECK_FALSE(d.merge_reported);
    for (const Block& b : d.blocks) {
        CHECK_FALSE(b.touches_boundary);
        CHECK_FALSE(b.suspect);
        CHECK(b.zeros.size() == 1);
    }
}

TEST_CASE("close zeros merge into one block") {
    const Surface W = Surface::rectangle({-1, -1}, {1, 1});
    const BlockDecomposition d = decompose_blocks(parse_field("(x^2 - 0.0016, y)"), W, 64);
    REQUIRE(d.blocks.size() == 1);
    CHECK(d.blocks[0].zeros.size() == 2);
    CHECK(d.blocks[0].index.value == 0);
}

TEST_CASE("a boundary zero circle forms a single boundary block") {
    const LimaPair lp = build_lima_pair(1.0);
    const Surface D = Surface::disk({0, 0}, 1);
    const BlockDecomposition d = decompose_blocks(lp.X, D, 64);
    REQUIRE(d.blocks.size() == 1);
    CHECK(d.blocks[0].touches_boundary);
    CHECK(d.blocks[0].index_ok);
    CHECK(d.blocks[0].index.value == 1);
}

TEST_CASE("each polished zero lies in exactly one block") {
    std::mt19937 rng(59);
    const Surface W = Surface::rectangle({-2, -2}, {2, 2});
    for (int trial = 0; trial < 8; ++trial) {
        const FieldExpr F = oracle::random_field(rng, 2);
        const ZeroScan scan = find_zeros(F, W, 64);
        const BlockDecomposition d = decompose_blocks(F, W, 64);
        for (Vec2 z : scan.zeros) {
            int owners = 0;
            for (const Block& b : d.blocks)
                if (b.mask.test(d.grid.locate(z))) ++owners;
            CHECK(owners == 1);
        }
    }
}

TEST_CASE("block indices sum to chi for inward fields") {
    const Surface D = Surface::disk({0, 0}, 1);
    for (const char* src : {"(-x, -y)", "(x - 2*x^3, -y)", "(-y - x*(x^2 + y^2), x - y*(x^2 + y^2))", "(-x + 0.5*x*y, -y + 0.2)"}) {
        INFO(src);
        const FieldExpr F = parse_field(src);
        for (Vec2 p : D.boundary_samples(128)) REQUIRE(D.inward_cone_test(p, F(p)));
        CHECK(block_sum(decompose_blocks(F, D, 64)) == D.euler_characteristic());
    }
}

TEST_CASE("block indices match the whole-region index on random quadratics") {
    std::mt19937 rng(61);
    const Surface S = Surface::rectangle({-2, -2}, {2, 2});
    const Region U = Region::rect({-1.75, -1.75}, {1.75, 1.75});
    int tested = 0;
    for (int trial = 0; trial < 60 && tested < 8; ++trial) {
        const FieldExpr F = oracle::random_field(rng, 2);
        const ZeroScan scan = find_zeros(F, S, 64);
        if (!scan.suspect_cells.empty()) continue;
        bool interior = true;
        for (Vec2 z : scan.zeros) interior = interior && std::max(std::abs(z.x), std::abs(z.y)) < 1.5;
        if (!interior) continue;
        int whole;
        try {
            whole = vector_field_index(F, S, U).value;
        } catch (const IndexError&) {
            continue;
        }
        const BlockDecomposition d = decompose_blocks(F, S, 64);
        bool ok = true;
        for (const Block& b : d.blocks) ok = ok && b.index_ok;
        if (!ok) continue;
        ++tested;
        CHECK(block_sum(d) == whole);
    }
    CHECK(tested >= 4);
}

TEST_CASE("dependency set examples") {
    const Surface D = Surface::disk({0, 0}, 1);
    const DependencySet rr = dependency_set(parse_field("(-y, x)"), parse_field("(-x, -y)"), D, 64);
    REQUIRE(rr.components.size() == 1);
    for (Cell c : rr.cells) CHECK(norm(rr.grid.center(c)) < 3 * rr.grid.h);

    const Surface W = Surface::rectangle({-1, -1}, {1, 1});
    const DependencySet line = dependency_set(parse_field("(1, 0)"), parse_field("(0, y)"), W, 64);
    CHECK(line.components.size() == 1);
    for (Cell c : line.cells) CHECK(std::abs(line.grid.center(c).y) < 2 * line.grid.h);

    const DependencySet free = dependency_set(parse_field("(1, 0)"), parse_field("(0, 1)"), W, 64);
    CHECK(free.cells.empty());
}

TEST_CASE("dependency set contains the zero cells of X") {
    const Surface W = Surface::rectangle({-2, -2}, {2, 2});
    const FieldExpr X = parse_field("(x^2 - 1, y)"), Y = parse_field("(-y, x + 0.3)");
    const DependencySet D = dependency_set(X, Y, W, 64);
    const ZeroScan scan = find_zeros(X, W, 64);
    for (Cell c : scan.zero_cells) {
        const Vec2 p = scan.grid.center(c);
        if (!W.contains(p)) continue;
        bool near = false;
        const Cell dc = D.grid.locate(p);
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) near = near || D.contains({dc.i + di, dc.j + dj});
        CHECK(near);
    }
}

TEST_CASE("dependency set is invariant under the flow of Y") {
    const Surface D = Surface::disk({0, 0}, 2);
    const FieldExpr X = parse_field("(-y, x)");
    const FieldExpr Y = parse_field("((1 - x^2 - y^2)*x, (1 - x^2 - y^2)*y)");
    const DependencySet dep = dependency_set(X, Y, D, 64);
    REQUIRE_FALSE(dep.cells.empty());
    const ScalarExpr w = wedge(X, Y), wx = w.derivative(0), wy = w.derivative(1);
    const double h = dep.grid.h;
    int flowed = 0;
    for (std::size_t k = 0; k < dep.cells.size(); k += 3) {
        // move the cell centre onto the wedge zero set by gradient Newton steps
        Vec2 p = dep.grid.center(dep.cells[k]);
        for (int it = 0; it < 80; ++it) {
            const Vec2 g{wx(p), wy(p)};
            const double gg = dot(g, g);
            if (gg == 0.0) break;
            p = p - (w(p) / gg) * g;
        }
        if (std::abs(w(p)) > 1e-12 || distance(p, dep.grid.center(dep.cells[k])) > h) continue;
        ++flowed;
        for (double t : {0.25, 0.5, 1.0}) {
            const Vec2 q = flow_to(Y, D, p, t);
            double best = INFINITY;
            for (Cell c : dep.cells) best = std::min(best, distance(q, dep.grid.center(c)));
            CHECK(best <= dep.grid.half_diagonal() + h);
        }
    }
    CHECK(flowed > 10);
}

TEST_CASE("return map of a rotation is the identity") {
    const Surface D = Surface::disk({0, 0}, 1);
    const ReturnMap rm = poincare_return_map(parse_field("(-y, x)"), D, {0.1, 0}, {0.9, 0});
    REQUIRE(rm.samples.size() == 20);
    for (const ReturnSample& s : rm.samples) {
        CHECK(s.returned);
        CHECK_THAT(s.s_out, WithinAbs(s.s_in, 1e-6));
        CHECK_THAT(s.time, WithinAbs(2 * kPi, 1e-5));
    }
}

TEST_CASE("area preservation gives identity returns") {
    const Surface D = Surface::disk({0, 0}, 2);
    for (const char* src : {"(4*y, -2*x)", "(-y, x)", "(y, -x - x^3)"}) {
        INFO(src);
        const FieldExpr Y = parse_field(src);
        REQUIRE(is_area_preserving(Y, D, oracle::probe_grid(), 1.0).preserving);
        const ReturnMap rm = poincare_return_map(Y, D, {0.1, 0}, {0.8, 0});
        CHECK(rm.any_returned());
        CHECK(rm.max_displacement() < 1e-6);
    }
}

TEST_CASE("return map near a limit cycle moves towards it") {
    const Surface D = Surface::disk({0, 0}, 2);
    const ReturnMap rm = poincare_return_map(kHopf, D, {0.2, 0}, {1.6, 0});
    for (const ReturnSample& s : rm.samples) {
        REQUIRE(s.returned);
        // the cycle r = 1 sits at arc length 0.8
        if (s.s_in < 0.8) CHECK(s.s_out > s.s_in);
        if (s.s_in > 0.8) CHECK(s.s_out < s.s_in);
    }
    CHECK(rm.max_displacement() > 0.01);
}

TEST_CASE("return map rejects a tangent segment") {
    CHECK_THROWS_AS(poincare_return_map(parse_field("(1, 0)"), Surface::disk({0, 0}, 2), {0, 0}, {1, 0}), std::domain_error);
}

TEST_CASE("a limit cycle is detected") {
    const Surface D = Surface::disk({0, 0}, 2);
    const std::vector<Cycle> cs = detect_cycles(kHopf, D, {{0.5, 0}, {1.5, 0}});
    REQUIRE(cs.size() == 1);
    CHECK_THAT(cs[0].period, WithinAbs(2 * kPi, 1e-4));
    CHECK(cs[0].closure_gap < 1e-6);
    for (std::size_t k = 0; k < cs[0].orbit.size(); k += 10) CHECK_THAT(norm(cs[0].orbit[k]), WithinAbs(1.0, 1e-4));
}

TEST_CASE("no cycle for a sink") {
    const Surface D = Surface::disk({0, 0}, 2);
    CHECK(detect_cycles(parse_field("(-x - y, x - y)"), D, {{1, 0}}).empty());
}

TEST_CASE("area preservation verdicts") {
    const Surface D = Surface::disk({0, 0}, 2);
    const AreaReport rot = is_area_preserving(parse_field("(-y, x)"), D, oracle::probe_grid(), 1.0);
    CHECK(rot.preserving);
    const AreaReport sink = is_area_preserving(parse_field("(-x, -y)"), D, {{0, 0}}, 1.0);
    CHECK_FALSE(sink.preserving);
    CHECK_THAT(sink.divergence_max, WithinAbs(2.0, 1e-9));
    CHECK_THAT(sink.jacobian_deviation_max, WithinAbs(1.0 - std::exp(-2.0), 1e-6));
    CHECK_THROWS_AS(is_area_preserving(parse_field("(-y, x)"), D, {{3, 0}}, 1.0), std::invalid_argument);
}

TEST_CASE("lima pair structure") {
    const LimaPair lp = build_lima_pair(1.0);
    const Surface D = Surface::disk({0, 0}, 1);
    // [X, Y] ^ X = 0 away from the boundary, by an independent difference quotient
    const auto Xm = [&](Vec2 p) { return Vec2(lp.X(p)); };
    const auto Ym = [&](Vec2 p) { return Vec2(lp.Y(p)); };
    for (Vec2 p : {Vec2{0.1, 0.2}, Vec2{-0.4, 0.3}, Vec2{0.5, -0.5}, Vec2{0, -0.7}}) {
        const Vec2 br = oracle::numeric_bracket(Xm, Ym, p);
        const Vec2 x = Xm(p);
        CHECK(std::abs(cross(br, x)) < 1e-6 * (1 + norm(br) * norm(x)));
    }
    for (Vec2 p : D.boundary_samples(32)) CHECK(norm(Xm(p)) < 1e-12);
    const ZeroScan zy = find_zeros(lp.Y, D, 64);
    REQUIRE(zy.zeros.size() == 1);
    CHECK(norm(zy.zeros[0]) < 1e-9);
    CHECK_FALSE(lp.X.regularity().analytic);
    CHECK_THROWS_AS(build_lima_pair(0.0), std::invalid_argument);
}
