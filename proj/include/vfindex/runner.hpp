#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "vfindex/scenario.hpp"

namespace vfindex {

/// A check failed for a reason other than bad input.
class CheckError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Json to_json(Vec2 p) { return Json::array({p.x, p.y}); }

inline Json to_json(const IndexResult& r) {
    Json j;
    j["value"] = r.value;
    j["tau"] = std::isnan(r.tau) ? Json(nullptr) : Json(r.tau);
    j["min_modulus"] = r.min_modulus;
    j["contour_points"] = r.contour_points();
    j["refinement_count"] = r.refinement_count;
    return j;
}

/// Executes the checks of one scenario, caching shared intermediate results.
class Runner {
public:
    explicit Runner(const Scenario& sc) : sc_(sc) {}

    const Scenario& scenario() const { return sc_; }
    const Surface& S() const { return sc_.S(); }
    const AnyField& X() const { return sc_.X; }
    const AnyField& Y() const { return *sc_.Y; }
    const Settings& cfg() const { return sc_.settings; }

    const ZeroScan& zeros_x() {
        if (!zx_) zx_ = find_zeros(X(), S(), cfg().resolution);
        return *zx_;
    }
    const ZeroScan& zeros_y() {
        if (!zy_) zy_ = find_zeros(Y(), S(), cfg().resolution);
        return *zy_;
    }
    const BlockDecomposition& blocks() {
        if (!blocks_) blocks_ = decompose_blocks(X(), S(), cfg().resolution, cfg().index);
        return *blocks_;
    }
    const DependencySet& dependency() {
        if (!dep_) dep_ = dependency_set(X(), Y(), S(), cfg().dependency_resolution, cfg().dependency_tol);
        return *dep_;
    }
    const std::vector<Cycle>& cycles() {
        if (!cycles_) cycles_ = detect_cycles(Y(), S(), cycle_seeds(), cfg().flow, cfg().cycles);
        return *cycles_;
    }
    std::vector<Trajectory> orbits() {
        std::vector<Trajectory> out;
        for (Vec2 s : cfg().orbit_seeds) {
            if (!S().contains(s)) throw ScenarioError("configs.orbits.seeds: seed outside the surface");
            out.push_back(flow(Y(), S(), s, cfg().orbit_t, cfg().flow));
        }
        return out;
    }

    Json run_check(const std::string& kind) {
        if (kind == "bracket_condition") return bracket_condition();
        if (kind == "blocks") return blocks_json();
        if (kind == "indices") return indices();
        if (kind == "euler") return euler();
        if (kind == "dependency") return dependency_json();
        if (kind == "cycles") return cycles_json();
        if (kind == "area") return area();
        if (kind == "theorem_1_5a") return theorem("1_5a");
        if (kind == "theorem_1_5b") return theorem("1_5b");
        if (kind == "theorem_1_8") return theorem("1_8");
        if (kind == "lima_example") return lima_example();
        if (kind == "nelson") return nelson();
        if (kind == "permute_curves") return permute_curves();
        throw ScenarioError("unknown check '" + kind + "'");
    }

private:
    Scenario sc_;
    std::optional<ZeroScan> zx_, zy_;
    std::optional<BlockDecomposition> blocks_;
    std::optional<DependencySet> dep_;
    std::optional<std::vector<Cycle>> cycles_;

    std::vector<Vec2> cycle_seeds() const {
        if (!cfg().cycle_seeds.empty()) return cfg().cycle_seeds;
        const Box& b = S().bounding_box();
        const Vec2 c = 0.5 * (b.lo + b.hi);
        std::vector<Vec2> out;
        for (double f : {0.25, 0.5, 0.75}) {
            const Vec2 p = c + Vec2{0.5 * f * b.width(), 0.0};
            if (S().contains(p)) out.push_back(p);
        }
        return out;
    }

    std::vector<Vec2> default_samples(int n) const {
        std::vector<Vec2> out;
        const Box& b = S().bounding_box();
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const Vec2 p{b.lo.x + (i + 0.5) * b.width() / n, b.lo.y + (j + 0.5) * b.height() / n};
                if (S().contains(p)) out.push_back(p);
            }
        return out;
    }

    Json bracket_condition() {
        const BracketVerdict v = check_bracket_condition(X(), Y(), S(), cfg().bracket_tol);
        Json j;
        j["holds"] = v.holds;
        j["exact"] = v.exact;
        j["residual"] = v.residual;
        j["samples"] = v.samples;
        j["witness"] = v.holds ? Json(nullptr) : to_json(v.witness);
        if (sc_.X.expr() && sc_.Y->expr()) j["bracket"] = lie_bracket(*sc_.X.expr(), *sc_.Y->expr()).to_string();
        Json cand = Json::array();
        for (const auto& [src, f] : sc_.candidates) {
            const BracketVerdict cv = check_bracket_condition(X(), AnyField(f), S(), cfg().bracket_tol);
            cand.push_back({{"field", src}, {"holds", cv.holds}, {"exact", cv.exact}, {"residual", cv.residual}});
        }
        j["candidates"] = cand;
        return j;
    }

    Json blocks_json() {
        const BlockDecomposition& bd = blocks();
        Json list = Json::array();
        Json indices = Json::array();
        int sum = 0;
        bool all_ok = true;
        for (const Block& b : bd.blocks) {
            Json e;
            e["cells"] = b.cells.size();
            e["zeros"] = Json::array();
            for (Vec2 z : b.zeros) e["zeros"].push_back(to_json(z));
            e["touches_boundary"] = b.touches_boundary;
            e["merged"] = b.merged;
            e["suspect"] = b.suspect;
            e["dilation"] = b.dilation;
            e["contours"] = b.region.contours.size();
            if (b.index_ok) {
                e["index"] = to_json(b.index);
                indices.push_back(b.index.value);
                sum += b.index.value;
            } else {
                e["index"] = nullptr;
                e["index_error"] = b.index_error;
                indices.push_back(nullptr);
                all_ok = false;
            }
            list.push_back(e);
        }
        Json j;
        j["count"] = bd.blocks.size();
        j["blocks"] = list;
        j["indices"] = indices;
        j["index_sum"] = all_ok ? Json(sum) : Json(nullptr);
        j["merge_reported"] = bd.merge_reported;
        j["resolution"] = cfg().resolution;
        return j;
    }

    Json indices() {
        const ZeroScan& zs = zeros_x();
        Json list = Json::array();
        int sum = 0;
        for (std::size_t k = 0; k < zs.zeros.size(); ++k) {
            const Vec2 z = zs.zeros[k];
            double r = std::min(0.25, S().boundary_distance(z));
            for (std::size_t m = 0; m < zs.zeros.size(); ++m)
                if (m != k) r = std::min(r, distance(z, zs.zeros[m]));
            r *= 0.45;
            Json e;
            e["point"] = to_json(z);
            e["radius"] = r;
            try {
                if (!(r > 1e-6)) throw IndexError(IndexError::Kind::not_isolating, "zero too close to the boundary or another zero");
                const IndexResult ir = index_at_zero(X(), z, r, cfg().index);
                e["index"] = ir.value;
                sum += ir.value;
            } catch (const IndexError& err) {
                e["index"] = nullptr;
                e["error"] = err.what();
            }
            list.push_back(e);
        }
        Json j;
        j["zeros"] = list;
        j["count"] = zs.zeros.size();
        j["suspect_cells"] = zs.suspect_cells.size();
        j["sum"] = sum;
        return j;
    }

    IndexResult surface_index() {
        const double delta = 4.0 * find_grid_h();
        return vector_field_index(X(), S(), S().enclosing_region(delta), cfg().index);
    }

    double find_grid_h() const { return S().bounding_box().extent() / cfg().resolution; }

    Json euler() {
        Json j;
        j["euler_characteristic"] = S().euler_characteristic();
        j["boundary_components"] = S().boundary_components();
        const IndexResult r = surface_index();
        j["surface_index"] = to_json(r);
        j["equal"] = r.value == S().euler_characteristic();
        return j;
    }

    Json dependency_json() {
        const DependencySet& d = dependency();
        Json j;
        j["cell_count"] = d.cells.size();
        j["component_count"] = d.components.size();
        Json sizes = Json::array();
        for (const auto& c : d.components) sizes.push_back(c.size());
        j["component_sizes"] = sizes;
        j["nonempty"] = !d.cells.empty();
        j["tol"] = cfg().dependency_tol;
        return j;
    }

    Json cycles_json() {
        const auto& cs = cycles();
        Json list = Json::array();
        for (const Cycle& c : cs) {
            list.push_back({{"period", c.period},
                            {"closure_gap", c.closure_gap},
                            {"points", c.orbit.size()},
                            {"start", to_json(c.orbit.front())},
                            {"transversal", Json::array({to_json(c.ta), to_json(c.tb)})}});
        }
        Json j;
        j["count"] = cs.size();
        j["cycles"] = list;
        return j;
    }

    std::vector<Vec2> area_probes() const {
        if (!cfg().area_probes.empty()) return cfg().area_probes;
        std::vector<Vec2> all = default_samples(4);
        return all;
    }

    Json area() {
        const AreaReport r = is_area_preserving(Y(), S(), area_probes(), cfg().area_t);
        Json j;
        j["divergence_max"] = r.divergence_max;
        j["jacobian_deviation_max"] = r.jacobian_deviation_max;
        j["verdict"] = r.preserving ? "preserving" : "not_preserving";
        j["probes"] = area_probes().size();
        j["t"] = cfg().area_t;
        return j;
    }

    bool inward(const AnyField& F) const {
        for (Vec2 p : S().boundary_samples(256))
            if (!S().inward_cone_test(p, F(p))) return false;
        return true;
    }

    // A zero of Y within one cell width of the cells of K.
    std::optional<Vec2> witness_in(const Block& K) {
        const ZeroScan& zy = zeros_y();
        const Grid& g = blocks().grid;
        const double reach = g.half_diagonal() + g.h;
        auto near_k = [&](Vec2 p) {
            return std::any_of(K.cells.begin(), K.cells.end(), [&](Cell c) { return distance(g.center(c), p) <= reach; });
        };
        for (Vec2 z : zy.zeros)
            if (near_k(z)) return z;
        for (Cell c : zy.suspect_cells)
            if (near_k(zy.grid.center(c))) return zy.grid.center(c);
        return std::nullopt;
    }

    bool y_cycles_around(const Block& K, Json& detail_out) {
        detail_out = Json::object();
        if (K.suspect || K.zeros.size() != 1) {
            detail_out["reason"] = "nested cycles are only certified around point blocks";
            return false;
        }
        const Vec2 z = K.zeros.front();
        Json found = Json::array();
        bool all = true;
        CycleOptions opt = cfg().cycles;
        opt.transient = 0.0;
        for (double d : cfg().cycle_radii) {
            const Vec2 seed = z + Vec2{d, 0.0};
            bool ok = false;
            if (S().contains(seed)) {
                for (const Cycle& c : detect_cycles(Y(), S(), {seed}, cfg().flow, opt)) {
                    const Curve poly{c.orbit, true};
                    double far = 0.0;
                    for (Vec2 p : c.orbit) far = std::max(far, distance(p, z));
                    if (winding_about(poly, z) != 0 && far <= 2.0 * d) ok = true;
                }
            }
            found.push_back({{"radius", d}, {"cycle", ok}});
            all = all && ok;
        }
        detail_out["radii"] = found;
        return all;
    }

    Json theorem(const std::string& which) {
        Json hyp;
        std::vector<std::string> failed;
        auto record = [&](const std::string& name, bool ok) {
            hyp[name] = ok;
            if (!ok) failed.push_back(name);
        };
        record("c1", !(sc_.hypotheses.contains("c1") && !sc_.hypotheses["c1"].get<bool>()));
        record("inward_X", inward(X()));
        record("inward_Y", inward(Y()));
        record("bracket", check_bracket_condition(X(), Y(), S(), cfg().bracket_tol).holds);

        const BlockDecomposition& bd = blocks();
        std::vector<const Block*> essential;
        bool undetermined = false;
        for (const Block& b : bd.blocks) {
            if (!b.index_ok) undetermined = true;
            else if (b.index.value != 0) essential.push_back(&b);
        }
        record("essential", !essential.empty());
        if (undetermined) hyp["essential_undetermined"] = true;

        Json extra = Json::object();
        if (which == "1_5a") {
            const bool declared = !(sc_.hypotheses.contains("analytic") && !sc_.hypotheses["analytic"].get<bool>());
            record("analytic", declared && X().regularity().analytic && Y().regularity().analytic);
        } else if (which == "1_5b") {
            bool all = !essential.empty();
            Json per = Json::array();
            for (const Block* K : essential) {
                Json d;
                all = y_cycles_around(*K, d) && all;
                per.push_back(d);
            }
            extra["cycles"] = per;
            record("cycle_neighbourhoods", all);
        } else {
            const AreaReport ar = is_area_preserving(Y(), S(), area_probes(), cfg().area_t);
            extra["divergence_max"] = ar.divergence_max;
            extra["jacobian_deviation_max"] = ar.jacobian_deviation_max;
            record("area_preserving", ar.preserving);
            const bool c2 = !(sc_.hypotheses.contains("c2") && !sc_.hypotheses["c2"].get<bool>()) && Y().regularity().c2;
            bool k_cycle = false;
            for (const Block* K : essential) {
                for (const Cycle& c : cycles()) {
                    const Grid& g = bd.grid;
                    bool inside = true;
                    for (Vec2 p : c.orbit)
                        if (!K->mask.test(g.locate(p))) inside = false;
                    if (inside) k_cycle = true;
                }
            }
            Json cond;
            cond["i_cycle_in_K"] = k_cycle;
            cond["ii_c2"] = c2;
            cond["iii_planar_neighbourhood"] = true;  // every modelled surface is planar
            extra["conditions"] = cond;
            record("condition", true);  // (iii) holds
        }

        Json witnesses = Json::array();
        bool all_witnessed = !essential.empty();
        for (const Block* K : essential) {
            const auto w = witness_in(*K);
            witnesses.push_back(w ? to_json(*w) : Json(nullptr));
            all_witnessed = all_witnessed && w.has_value();
        }
        Json j;
        j["hypotheses"] = hyp;
        j["details"] = extra;
        j["essential_blocks"] = essential.size();
        j["essential_indices"] = Json::array();
        for (const Block* K : essential) j["essential_indices"].push_back(K->index.value);
        j["observed_intersection"] = all_witnessed;
        j["witnesses"] = witnesses;
        j["witness"] = (!witnesses.empty() && !witnesses[0].is_null()) ? witnesses[0] : Json(nullptr);
        j["failed_hypotheses"] = failed;
        if (failed.empty()) {
            j["verdict"] = all_witnessed ? "pass" : "fail";
            j["note"] = all_witnessed ? "hypotheses hold; conclusion witnessed" : "hypotheses hold but Z Y does not meet K";
        } else {
            std::string names;
            for (const auto& f : failed) names += (names.empty() ? "" : ", ") + f;
            j["verdict"] = "flag";
            j["note"] = std::string(failed.size() == 1 ? "hypothesis (" : "hypotheses (") + names +
                        (failed.size() == 1 ? ") fails" : ") fail") + "; conclusion not asserted";
        }
        if (!essential.empty()) j["index"] = essential.front()->index.value;
        else if (!bd.blocks.empty() && bd.blocks.front().index_ok) j["index"] = bd.blocks.front().index.value;
        else j["index"] = nullptr;
        return j;
    }

    Json lima_example() {
        const LimaPair& lp = *sc_.lima;
        const Surface& D = S();
        const BracketVerdict bv = check_bracket_condition(lp.X, AnyField(lp.Y), D, 1e-6);
        const BlockDecomposition& bd = blocks();
        const ZeroScan& zy = zeros_y();
        Json j;
        j["bracket_residual"] = bv.residual;
        j["block_count"] = bd.blocks.size();
        j["block_index"] = bd.blocks.size() == 1 && bd.blocks[0].index_ok ? Json(bd.blocks[0].index.value) : Json(nullptr);
        j["touches_boundary"] = bd.blocks.size() == 1 && bd.blocks[0].touches_boundary;
        j["zy_count"] = zy.zeros.size();
        j["zy_suspect_cells"] = zy.suspect_cells.size();
        j["zy_point"] = zy.zeros.size() == 1 ? to_json(zy.zeros[0]) : Json(nullptr);
        j["zy_origin_distance"] = zy.zeros.size() == 1 ? Json(norm(zy.zeros[0])) : Json(nullptr);
        double dmin = INFINITY;
        const ZeroScan& zx = zeros_x();
        for (Cell c : zx.zero_cells)
            for (Vec2 z : zy.zeros) dmin = std::min(dmin, distance(zx.grid.center(c), z));
        j["min_distance_zx_zy"] = std::isfinite(dmin) ? Json(dmin) : Json(nullptr);
        const bool ok = bv.residual < 1e-6 && bd.blocks.size() == 1 && bd.blocks[0].index_ok &&
                        bd.blocks[0].index.value == 1 && bd.blocks[0].touches_boundary && zy.zeros.size() == 1 &&
                        zy.suspect_cells.empty() && norm(zy.zeros[0]) < 1e-6 && dmin > 0.5;
        j["verdict"] = ok ? "pass" : "fail";
        j["steepness"] = lp.steepness;
        j["twist"] = lp.twist;
        return j;
    }

    Json nelson() {
        const Vec2 p = cfg().nelson_p;
        if (!S().contains(p)) throw ScenarioError("configs.nelson.p: point outside the surface");
        FlowConfig tight = cfg().flow;
        tight.abs_tol = tight.rel_tol = 1e-13;
        const AnyField sum = (X().expr() && Y().expr()) ? AnyField(*X().expr() + *Y().expr()) : linear_combination(1.0, X(), 1.0, Y());
        const Vec2 ref = flow_to(sum, S(), p, cfg().nelson_t, tight);
        Json errors = Json::array();
        std::vector<double> e;
        for (int k : cfg().nelson_ks) {
            const Vec2 q = nelson_compose(X(), Y(), S(), p, cfg().nelson_t, k, cfg().flow);
            e.push_back(distance(q, ref));
            errors.push_back(e.back());
        }
        bool monotone = true;
        Json pair = Json::array();
        for (std::size_t i = 1; i < e.size(); ++i) {
            monotone = monotone && e[i] < e[i - 1];
            pair.push_back(std::log(e[i - 1] / e[i]) / std::log(static_cast<double>(cfg().nelson_ks[i]) / cfg().nelson_ks[i - 1]));
        }
        Json j;
        j["ks"] = cfg().nelson_ks;
        j["errors"] = errors;
        j["monotone"] = monotone;
        j["order"] = fitted_order(cfg().nelson_ks, e);
        j["pairwise_orders"] = pair;
        j["reference"] = to_json(ref);
        return j;
    }

    Json permute_curves() {
        std::vector<Vec2> samples = cfg().permute_samples;
        if (samples.empty())
            for (Vec2 p : default_samples(5))
                if (norm(Vec2(X()(p))) > 1e-3) samples.push_back(p);
        const PermuteReport r = check_permutes_integral_curves(X(), Y(), S(), samples, cfg().permute_t, cfg().flow);
        Json j;
        j["max_residual"] = r.max_residual;
        j["min_c"] = r.min_c;
        j["samples"] = r.samples.size();
        Json cs = Json::array();
        for (const auto& s : r.samples) cs.push_back(s.c);
        j["c"] = cs;

        // Z X is positively invariant under the Y-flow.
        const ZeroScan& zx = zeros_x();
        std::vector<Vec2> zpts = zx.zeros;
        for (Cell c : zx.suspect_cells) zpts.push_back(S().project(zx.grid.center(c)));
        const double tol = zx.suspect_cells.empty() ? 1e-6 : zx.grid.h;
        const auto dist = [&](Vec2 q) {
            double d = INFINITY;
            for (Vec2 z : zpts) d = std::min(d, distance(q, z));
            return d;
        };
        const InvarianceReport inv = check_positive_invariance(dist, Y(), S(), zpts, 1.0, cfg().flow, tol);
        j["zx_samples"] = zpts.size();
        j["zx_invariance_violations"] = inv.violations.size();
        j["zx_max_distance"] = zpts.empty() ? 0.0 : inv.max_distance;
        return j;
    }

public:
    /// Least-squares slope of -log(error) against log(k).
    static double fitted_order(const std::vector<int>& ks, const std::vector<double>& e) {
        const std::size_t n = ks.size();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double lx = std::log(static_cast<double>(ks[i])), ly = std::log(e[i]);
            sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
        }
        const double den = n * sxx - sx * sx;
        return den == 0.0 ? 0.0 : -(n * sxy - sx * sy) / den;
    }
};

namespace detail {

inline const Json* resolve(const Json& root, const std::string& path) {
    const Json* cur = &root;
    std::size_t start = 0;
    while (start <= path.size()) {
        const std::size_t dot = path.find('.', start);
        const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (cur->is_object()) {
            if (!cur->contains(part)) return nullptr;
            cur = &(*cur)[part];
        } else if (cur->is_array()) {
            if (part.empty() || !std::all_of(part.begin(), part.end(), [](char c) { return c >= '0' && c <= '9'; })) return nullptr;
            const std::size_t idx = std::stoul(part);
            if (idx >= cur->size()) return nullptr;
            cur = &(*cur)[idx];
        } else {
            return nullptr;
        }
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return cur;
}

inline Json evaluate_assertion(const Json& checks, const std::string& path, const Json& want) {
    Json a;
    a["path"] = path;
    a["expected"] = want;
    const Json* got = resolve(checks, path);
    if (!got) {
        a["actual"] = nullptr;
        a["pass"] = false;
        a["message"] = "no such output";
        return a;
    }
    a["actual"] = *got;
    bool pass = false;
    std::string msg;
    if (want.is_object()) {
        pass = true;
        if (want.contains("nonempty")) {
            const bool ne = (got->is_array() || got->is_object() || got->is_string()) ? !got->empty()
                            : got->is_number() ? got->get<double>() != 0.0 : false;
            pass = pass && ne == want["nonempty"].get<bool>();
        }
        const bool numeric_cmp = want.contains("min") || want.contains("max") || want.contains("approx");
        if (numeric_cmp && !got->is_number()) {
            pass = false;
            msg = "type mismatch: numeric comparison on a non-number";
        } else if (numeric_cmp) {
            const double v = got->get<double>();
            if (want.contains("min")) pass = pass && v >= want["min"].get<double>();
            if (want.contains("max")) pass = pass && v <= want["max"].get<double>();
            if (want.contains("approx")) {
                const double tol = want.contains("tol") ? want["tol"].get<double>() : 1e-9;
                pass = pass && std::abs(v - want["approx"].get<double>()) <= tol;
            }
        }
    } else if (want.is_number() && got->is_number()) {
        pass = want.is_number_integer() && got->is_number_integer() ? want.get<long long>() == got->get<long long>()
                                                                    : want.get<double>() == got->get<double>();
    } else {
        pass = *got == want;
        if (!pass && got->type() != want.type()) msg = "type mismatch";
    }
    a["pass"] = pass;
    if (!msg.empty()) a["message"] = msg;
    return a;
}

}  // namespace detail

/// Runs every check and evaluates the expected assertions. Throws
/// CheckError (with the check name) when a check cannot be completed.
inline Json run_scenario(const Scenario& sc) {
    Runner runner(sc);
    Json checks = Json::object();
    for (const std::string& kind : sc.checks) {
        try {
            checks[kind] = runner.run_check(kind);
        } catch (const ScenarioError&) {
            throw;
        } catch (const std::exception& e) {
            throw CheckError("check '" + kind + "': " + e.what());
        }
    }
    Json assertions = Json::array();
    bool pass = true;
    for (const auto& [path, want] : sc.expected.items()) {
        Json a = detail::evaluate_assertion(checks, path, want);
        pass = pass && a["pass"].get<bool>();
        assertions.push_back(std::move(a));
    }
    for (const auto& [kind, out] : checks.items())
        if (out.is_object() && out.contains("verdict") && out["verdict"] == "fail") pass = false;
    Json report;
    report["scenario"] = sc.name;
    report["checks"] = checks;
    report["assertions"] = assertions;
    report["verdict"] = pass ? "pass" : "fail";
    report["provenance"] = {{"config_hash", hex64(fnv1a(sc.raw.dump()))}, {"version", kVersion}};
    return report;
}

inline Json run_scenario(const std::string& path) { return run_scenario(load_scenario_file(path)); }

}  // namespace vfindex
