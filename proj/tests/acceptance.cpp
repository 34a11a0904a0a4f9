// Acceptance checks, one line per criterion. Usage: acceptance [n]
// Exit status is 0 iff every selected criterion passes.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "vfindex/index.hpp"
#include "vfindex/runner.hpp"

using namespace vfindex;

namespace {

const std::filesystem::path kScenarios = VFINDEX_SCENARIOS;

// Pinned tolerances.
constexpr double kPerturbFraction = 0.1;
constexpr double kLimaBracketTol = 1e-6;
constexpr double kLimaOriginTol = 1e-6;
constexpr double kLimaSeparation = 0.5;
constexpr double kDivergenceTol = 1e-10;
constexpr double kNelsonMinOrder = 1.0;
constexpr double kPermuteTol = 1e-5;
constexpr double kReturnTol = 1e-5;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [" << what << "]";
        }
    }
};

VectorMap as_map(const AnyField& F) {
    return [F](Vec2 p) { return F(p); };
}

VectorMap linear_map(double a, double b, double c, double d) {
    return [=](Vec2 p) { return Vec2{a * p.x + b * p.y, c * p.x + d * p.y}; };
}

double contour_min_field(const AnyField& X, const IndexResult& r) {
    double m = INFINITY;
    for (const Curve& c : r.contours)
        for (Vec2 p : c.vertices) m = std::min(m, norm(X(p)));
    return m;
}

std::vector<Vec2> perturbations(double eps) {
    std::vector<Vec2> out;
    for (int k = 0; k < 8; ++k) out.push_back(eps * Vec2{std::cos(k * kPi / 4 + 0.1), std::sin(k * kPi / 4 + 0.1)});
    return out;
}

// ---- shared fixtures -----------------------------------------------------

struct TableRow {
    const char* src;
    int expected;
};
const std::vector<TableRow> kTable{{"(x, y)", 1}, {"(x, -y)", -1}, {"(-y, x)", 1}, {"(x^2 - y^2, 2*x*y)", 2}, {"(y, x)", -1}};

struct LinearRow {
    double a, d;
    int expected;
};
const std::vector<LinearRow> kLinear{{2, 2, 1}, {2, 0.5, -1}, {0.5, 0.5, 1}, {-2, 0.5, -1}};

struct RandomCase {
    FieldExpr F;
    std::vector<Vec2> zeros;
};

const Surface& square() {
    static const Surface S = Surface::rectangle({-2, -2}, {2, 2});
    return S;
}
const Region& inner_square() {
    static const Region U = Region::rect({-1.75, -1.75}, {1.75, 1.75});
    return U;
}

// 20 seeded degree <= 2 fields whose zeros in S are hyperbolic, well
// separated and inside U.
const std::vector<RandomCase>& random_cases() {
    static const std::vector<RandomCase> cases = [] {
        std::vector<RandomCase> out;
        std::mt19937 rng(20240611);
        while (out.size() < 20) {
            RandomCase rc{oracle::random_field(rng, 2), {}};
            const ZeroScan scan = find_zeros(rc.F, square(), 128);
            if (scan.zeros.empty() || !scan.suspect_cells.empty()) continue;
            bool ok = true;
            for (std::size_t i = 0; i < scan.zeros.size() && ok; ++i) {
                const Vec2 z = scan.zeros[i];
                ok = std::max(std::abs(z.x), std::abs(z.y)) < 1.5 && std::abs(Mat2(rc.F.jacobian(z)).det()) > 0.1;
                for (std::size_t j = 0; j < i; ++j) ok = ok && distance(z, scan.zeros[j]) > 0.3;
            }
            if (!ok) continue;
            rc.zeros = scan.zeros;
            out.push_back(std::move(rc));
        }
        return out;
    }();
    return cases;
}

double isolating_radius(const std::vector<Vec2>& zeros, std::size_t i) {
    double r = 0.25;
    for (std::size_t j = 0; j < zeros.size(); ++j)
        if (j != i) r = std::min(r, distance(zeros[i], zeros[j]));
    return 0.45 * r;
}

// ---- criteria ------------------------------------------------------------

Outcome c1() {
    Outcome o;
    for (const auto& row : kTable) {
        const FieldExpr F = parse_field(row.src);
        const int got = index_at_zero(F, {0, 0}, 0.5).value;
        const int ref = oracle::winding([&](Vec2 p) { return F(p); }, {0, 0}, 0.5, 10000);
        o.detail << " " << row.src << "=" << got;
        o.require(got == row.expected && ref == row.expected, std::string(row.src) + " expected " + std::to_string(row.expected));
    }
    return o;
}

Outcome c2() {
    Outcome o;
    const Surface big = Surface::disk({0, 0}, 10);
    for (const auto& row : kLinear) {
        const int got = fixed_point_index(linear_map(row.a, 0, 0, row.d), big, Region::disk({0, 0}, 1)).value;
        o.detail << " diag(" << row.a << "," << row.d << ")=" << got;
        o.require(got == row.expected, "diag(" + std::to_string(row.a) + "," + std::to_string(row.d) + ") expected " +
                                           std::to_string(row.expected) + ", sign det(I-A)=" +
                                           std::to_string(oracle::linear_fixed_point_index(row.a, 0, 0, row.d)));
    }
    return o;
}

Outcome c3() {
    Outcome o;
    const Surface D = Surface::disk({0, 0}, 1);
    const Surface A = Surface::annulus({0, 0}, 0.5, 1.5);
    const int d = vector_field_index(parse_field("(-x, -y)"), D, D.enclosing_region(0.05)).value;
    const int a = vector_field_index(parse_field("(-y, x)"), A, A.enclosing_region(0.05)).value;
    o.detail << " disk=" << d << " annulus=" << a;
    o.require(d == 1 && d == D.euler_characteristic(), "disk");
    o.require(a == 0 && a == A.euler_characteristic(), "annulus");
    return o;
}

Outcome c4() {
    Outcome o;
    int zeros = 0;
    for (std::size_t k = 0; k < random_cases().size(); ++k) {
        const RandomCase& rc = random_cases()[k];
        const int whole = vector_field_index(rc.F, square(), inner_square()).value;
        const BlockDecomposition bd = decompose_blocks(rc.F, square(), 128);
        int blocks = 0;
        bool ok = true;
        for (const Block& b : bd.blocks) {
            ok = ok && b.index_ok && !b.merged;
            blocks += b.index.value;
        }
        int local = 0;
        for (std::size_t i = 0; i < rc.zeros.size(); ++i) {
            local += index_at_zero(rc.F, rc.zeros[i], isolating_radius(rc.zeros, i)).value;
            ++zeros;
        }
        o.require(ok && blocks == whole && local == whole, "field " + std::to_string(k) + ": blocks " + std::to_string(blocks) +
                                                               " whole " + std::to_string(whole) + " local " + std::to_string(local));
    }
    o.detail << " fields=" << random_cases().size() << " zeros=" << zeros;
    return o;
}

Outcome c5() {
    Outcome o;
    int tried = 0;
    for (const auto& row : kTable) {
        const AnyField F(parse_field(row.src));
        const IndexResult base = index_at_zero(F, {0, 0}, 0.5);
        for (Vec2 c : perturbations(kPerturbFraction * base.min_modulus)) {
            ++tried;
            o.require(winding_number(as_map(shifted(F, c)), Curve::circle({0, 0}, 0.5, 64)).value == base.value,
                      std::string("table ") + row.src);
        }
    }
    const Surface big = Surface::disk({0, 0}, 10);
    for (const auto& row : kLinear) {
        const VectorMap f = linear_map(row.a, 0, 0, row.d);
        const IndexResult base = fixed_point_index(f, big, Region::disk({0, 0}, 1));
        for (Vec2 c : perturbations(kPerturbFraction * base.min_modulus)) {
            ++tried;
            o.require(fixed_point_index([&](Vec2 p) { return f(p) + c; }, big, Region::disk({0, 0}, 1)).value == base.value,
                      "linear map");
        }
    }
    const Surface D = Surface::disk({0, 0}, 1);
    const Surface A = Surface::annulus({0, 0}, 0.5, 1.5);
    const std::vector<std::pair<const Surface*, AnyField>> whole{{&D, AnyField(parse_field("(-x, -y)"))},
                                                                 {&A, AnyField(parse_field("(-y, x)"))}};
    for (const auto& [S, X] : whole) {
        const Region U = S->enclosing_region(0.05);
        const IndexResult base = vector_field_index(X, *S, U);
        for (Vec2 c : perturbations(kPerturbFraction * contour_min_field(X, base))) {
            ++tried;
            o.require(vector_field_index(shifted(X, c), *S, U).value == base.value, "whole surface " + S->kind_name());
        }
    }
    for (std::size_t k = 0; k < random_cases().size(); ++k) {
        const RandomCase& rc = random_cases()[k];
        const AnyField X(rc.F);
        const IndexResult base = vector_field_index(X, square(), inner_square());
        double eps = contour_min_field(X, base);
        std::vector<IndexResult> locals;
        for (std::size_t i = 0; i < rc.zeros.size(); ++i) {
            locals.push_back(index_at_zero(X, rc.zeros[i], isolating_radius(rc.zeros, i)));
            eps = std::min(eps, locals.back().min_modulus);
        }
        for (Vec2 c : perturbations(kPerturbFraction * eps)) {
            ++tried;
            const AnyField Xc = shifted(X, c);
            bool same = vector_field_index(Xc, square(), inner_square()).value == base.value;
            for (std::size_t i = 0; i < rc.zeros.size(); ++i)
                same = same && winding_number(as_map(Xc), Curve::circle(rc.zeros[i], isolating_radius(rc.zeros, i), 64)).value ==
                                   locals[i].value;
            o.require(same, "random field " + std::to_string(k));
        }
    }
    o.detail << " perturbations=" << tried;
    return o;
}

Outcome c6() {
    Outcome o;
    const Scenario sc = load_scenario_file((kScenarios / "lima.json").string());
    Runner run(sc);
    const Json r = run.run_check("lima_example");
    const double res = r["bracket_residual"], dz = r["zy_origin_distance"], sep = r["min_distance_zx_zy"];
    o.detail << " residual=" << res << " blocks=" << r["block_count"] << " index=" << r["block_index"]
             << " zy=" << r["zy_count"] << " |zy|=" << dz << " sep=" << sep;
    o.require(res < kLimaBracketTol, "bracket residual");
    o.require(r["block_count"] == 1 && r["touches_boundary"] == true && r["block_index"] == 1, "single boundary block of index 1");
    o.require(r["zy_count"] == 1 && dz < kLimaOriginTol, "Z Y at the origin");
    o.require(sep > kLimaSeparation, "Z X and Z Y separated");
    return o;
}

Outcome c7() {
    Outcome o;
    const Json r = run_scenario((kScenarios / "rotation_radial.json").string());
    const Json& bc = r["checks"]["bracket_condition"];
    const Json& th = r["checks"]["theorem_1_5a"];
    o.detail << " verdict=" << th["verdict"] << " index=" << th["index"] << " witness=" << th["witness"];
    o.require(bc["holds"] == true && bc["exact"] == true && bc["residual"] == 0, "symbolic commutation");
    o.require(th["hypotheses"]["inward_X"] == true && th["hypotheses"]["inward_Y"] == true, "inwardness");
    o.require(th["hypotheses"]["essential"] == true && th["index"] == 1, "essential with index 1");
    o.require(th["verdict"] == "pass" && th["observed_intersection"] == true, "conclusion witnessed");
    o.require(th["witness"].is_array() && std::hypot(th["witness"][0].get<double>(), th["witness"][1].get<double>()) < 1e-9,
              "witness is the zero of Y");
    return o;
}

Outcome c8() {
    Outcome o;
    const Json ap = run_scenario((kScenarios / "area_preserving.json").string());
    const Json& area = ap["checks"]["area"];
    const Json& th = ap["checks"]["theorem_1_8"];
    o.detail << " area=" << area["verdict"] << " div=" << area["divergence_max"] << " theorem=" << th["verdict"];
    o.require(area["verdict"] == "preserving" && area["divergence_max"].get<double>() < kDivergenceTol, "area preservation");
    o.require(th["verdict"] == "pass" && th["witness"].is_array() &&
                  std::hypot(th["witness"][0].get<double>(), th["witness"][1].get<double>()) < 1e-9,
              "witness at the origin");
    const Json an = run_scenario((kScenarios / "annulus_consistency.json").string());
    const Json& ath = an["checks"]["theorem_1_5a"];
    const std::string note = ath["note"];
    o.detail << " annulus=\"" << note << "\" index=" << ath["index"];
    o.require(note.find("hypothesis (essential) fails") != std::string::npos && ath["index"] == 0, "annulus consistency");
    return o;
}

double least_squares_order(const std::vector<int>& ks, const std::vector<double>& errs) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const double x = std::log(static_cast<double>(ks[i])), y = std::log(errs[i]);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome c9() {
    Outcome o;
    const Surface big = Surface::disk({0, 0}, 10);
    FlowConfig tight;
    tight.abs_tol = tight.rel_tol = 1e-13;
    const std::vector<int> ks{2, 4, 8, 16, 32};
    auto study = [&](const char* xs, const char* ys, const char* label, bool gate) {
        const FieldExpr X = parse_field(xs), Y = parse_field(ys);
        const Vec2 ref = flow_to(X + Y, big, {1, 0}, 0.5, tight);
        std::vector<double> errs;
        for (int k : ks) errs.push_back(distance(nelson_compose(X, Y, big, {1, 0}, 0.5, k), ref));
        bool monotone = true;
        for (std::size_t i = 1; i < errs.size(); ++i) monotone = monotone && errs[i] < errs[i - 1];
        const double order = least_squares_order(ks, errs);
        o.detail << " " << label << ": err(2)=" << errs.front() << " err(32)=" << errs.back() << " order=" << order
                 << (monotone ? " monotone" : " not monotone");
        if (gate) o.require(monotone && order >= kNelsonMinOrder, label);
    };
    study("(-y, x)", "(0.1*x, 0.1*y)", "stated pair", true);
    // the stated pair commutes, so its errors are at integrator noise level;
    // a noncommuting pair shows the first-order rate
    study("(-y, x)", "(0.1*x, -0.1*y)", "noncommuting pair", false);
    return o;
}

Outcome c10() {
    Outcome o;
    const Surface big = Surface::disk({0, 0}, 10);
    const std::vector<std::pair<const char*, const char*>> pairs{{"(1, 0)", "(x, y)"}, {"(-y, x)", "(-x, -y)"}};
    for (const auto& [xs, ys] : pairs) {
        const FieldExpr X = parse_field(xs), Y = parse_field(ys);
        std::vector<Vec2> samples;
        for (Vec2 p : oracle::probe_grid())
            if (norm(X(p)) > 1e-3) samples.push_back(p);
        const PermuteReport pr = check_permutes_integral_curves(X, Y, big, samples, 0.3);
        std::vector<Vec2> zx;
        for (Vec2 z : find_zeros(X, big, 64).zeros) zx.push_back(z);
        const auto dist_zx = [&](Vec2 p) {
            double d = INFINITY;
            for (Vec2 z : zx) d = std::min(d, distance(p, z));
            return d;
        };
        std::size_t violations = 0;
        if (!zx.empty()) violations = check_positive_invariance(dist_zx, Y, big, zx, 1.0).violations.size();
        o.detail << " " << xs << "/" << ys << ": residual=" << pr.max_residual << " min_c=" << pr.min_c
                 << " zx=" << zx.size() << " violations=" << violations;
        o.require(pr.max_residual < kPermuteTol && pr.min_c > 0, std::string(xs) + " permute");
        o.require(violations == 0, std::string(xs) + " invariance");
    }
    return o;
}

Outcome c11() {
    Outcome o;
    const ReturnMap rm = poincare_return_map(parse_field("(-y, x)"), Surface::disk({0, 0}, 1), {0.1, 0}, {0.9, 0});
    bool all = rm.samples.size() == 20;
    for (const auto& s : rm.samples) all = all && s.returned;
    o.detail << " samples=" << rm.samples.size() << " max_displacement=" << rm.max_displacement();
    o.require(all, "every sample returns");
    o.require(rm.max_displacement() < kReturnTol, "identity");
    return o;
}

const std::vector<std::function<Outcome()>> kCriteria{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> which;
    if (argc > 1) {
        const int n = std::atoi(argv[1]);
        if (n < 1 || n > static_cast<int>(kCriteria.size())) {
            std::fprintf(stderr, "criterion must be 1..%zu\n", kCriteria.size());
            return 2;
        }
        which.push_back(n);
    } else {
        for (int n = 1; n <= static_cast<int>(kCriteria.size()); ++n) which.push_back(n);
    }
    bool all = true;
    for (int n : which) {
        Outcome o;
        try {
            o = kCriteria[n - 1]();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " exception: " << e.what();
        }
        all = all && o.pass;
        std::printf("criterion %d: %s%s\n", n, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    }
    return all ? 0 : 1;
}
