#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "vfindex/blocks.hpp"
#include "vfindex/lima.hpp"

namespace vfindex {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "vfindex 1.0.0";

/// Malformed scenario input: bad JSON, schema violations, unparsable fields.
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> k{"bracket_condition", "blocks",       "indices",      "euler",
                                            "dependency",        "cycles",       "area",         "theorem_1_5a",
                                            "theorem_1_5b",      "theorem_1_8",  "lima_example", "nelson",
                                            "permute_curves"};
    return k;
}

struct Settings {
    int resolution = kDefaultResolution;
    FlowConfig flow{};
    IndexConfig index{};
    double bracket_tol = 1e-8;
    double dependency_tol = 1e-7;
    int dependency_resolution = kDefaultResolution;
    std::vector<Vec2> cycle_seeds;
    CycleOptions cycles{};
    std::vector<Vec2> area_probes;
    double area_t = 1.0;
    Vec2 nelson_p{1.0, 0.0};
    double nelson_t = 0.5;
    std::vector<int> nelson_ks{2, 4, 8, 16, 32};
    std::vector<Vec2> permute_samples;
    double permute_t = 0.3;
    std::vector<double> cycle_radii{0.4, 0.2, 0.1, 0.05};
    std::vector<Vec2> orbit_seeds;
    double orbit_t = 5.0;
};

struct Scenario {
    std::string name;
    Json raw;
    std::optional<Surface> surface;
    AnyField X;
    std::optional<AnyField> Y;
    std::optional<LimaPair> lima;
    std::vector<std::pair<std::string, FieldExpr>> candidates;
    Json hypotheses = Json::object();
    std::vector<std::string> checks;
    Settings settings;
    Json expected = Json::object();

    const Surface& S() const { return *surface; }
};

namespace detail {

inline Vec2 to_vec(const Json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ScenarioError(what + ": expected a point [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline std::vector<Vec2> to_points(const Json& j, const std::string& what) {
    if (!j.is_array()) throw ScenarioError(what + ": expected a list of points");
    std::vector<Vec2> out;
    for (const auto& e : j) out.push_back(to_vec(e, what));
    return out;
}

inline double num(const Json& obj, const char* key, const std::string& what) {
    if (!obj.contains(key)) throw ScenarioError(what + ": missing '" + key + "'");
    if (!obj[key].is_number()) throw ScenarioError(what + ": '" + key + "' must be a number");
    return obj[key].get<double>();
}

inline double num_or(const Json& obj, const char* key, double dflt, const std::string& what) {
    return obj.contains(key) ? num(obj, key, what) : dflt;
}

inline void only_keys(const Json& obj, std::initializer_list<const char*> keys, const std::string& what) {
    if (!obj.is_object()) throw ScenarioError(what + ": expected an object");
    for (const auto& [k, v] : obj.items()) {
        (void)v;
        if (std::none_of(keys.begin(), keys.end(), [&](const char* s) { return k == s; }))
            throw ScenarioError(what + ": unknown key '" + k + "'");
    }
}

}  // namespace detail

/// Surface from {"kind": ..., parameters}. Kinds: disk, annulus,
/// halfplane_window, rectangle, polygon.
inline Surface parse_surface(const Json& j) {
    using namespace detail;
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw ScenarioError("surface: missing 'kind'");
    const std::string kind = j["kind"];
    try {
        if (kind == "disk") {
            only_keys(j, {"kind", "center", "radius", "margin"}, "surface");
            Surface s = Surface::disk(j.contains("center") ? to_vec(j["center"], "surface.center") : Vec2{},
                                      num(j, "radius", "surface"));
            return j.contains("margin") ? s.with_margin(num(j, "margin", "surface")) : s;
        }
        if (kind == "annulus") {
            only_keys(j, {"kind", "center", "r_inner", "r_outer", "margin"}, "surface");
            Surface s = Surface::annulus(j.contains("center") ? to_vec(j["center"], "surface.center") : Vec2{},
                                         num(j, "r_inner", "surface"), num(j, "r_outer", "surface"));
            return j.contains("margin") ? s.with_margin(num(j, "margin", "surface")) : s;
        }
        if (kind == "halfplane_window") {
            only_keys(j, {"kind", "x0", "x1", "y0", "y1", "margin"}, "surface");
            Surface s = Surface::halfplane_window(num(j, "x0", "surface"), num(j, "x1", "surface"),
                                                  num_or(j, "y0", 0.0, "surface"), num(j, "y1", "surface"));
            return j.contains("margin") ? s.with_margin(num(j, "margin", "surface")) : s;
        }
        if (kind == "rectangle") {
            only_keys(j, {"kind", "lo", "hi", "margin"}, "surface");
            Surface s = Surface::rectangle(to_vec(j.at("lo"), "surface.lo"), to_vec(j.at("hi"), "surface.hi"));
            return j.contains("margin") ? s.with_margin(num(j, "margin", "surface")) : s;
        }
        if (kind == "polygon" || kind == "polygon_with_holes") {
            only_keys(j, {"kind", "outer", "holes", "margin"}, "surface");
            if (!j.contains("outer")) throw ScenarioError("surface: missing 'outer'");
            std::vector<std::vector<Vec2>> holes;
            if (j.contains("holes")) {
                if (!j["holes"].is_array()) throw ScenarioError("surface.holes: expected a list of polylines");
                for (const auto& h : j["holes"]) holes.push_back(to_points(h, "surface.holes"));
            }
            Surface s = Surface::polygon(to_points(j["outer"], "surface.outer"), std::move(holes));
            return j.contains("margin") ? s.with_margin(num(j, "margin", "surface")) : s;
        }
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(std::string("surface: ") + e.what());
    } catch (const Json::exception& e) {
        throw ScenarioError(std::string("surface: ") + e.what());
    }
    throw ScenarioError("surface: unknown kind '" + kind + "'");
}

inline FieldExpr parse_field_or_throw(const Json& j, const std::string& what) {
    if (!j.is_string()) throw ScenarioError(what + ": expected a field string \"(fx, fy)\"");
    try {
        return parse_field(j.get<std::string>());
    } catch (const ParseError& e) {
        throw ScenarioError(what + ": " + e.what());
    }
}

namespace detail {

inline FlowConfig parse_flow(const Json& j, FlowConfig f) {
    only_keys(j, {"method", "step", "abs_tol", "rel_tol", "min_step", "max_step", "boundary", "max_steps"}, "configs.flow");
    if (j.contains("method")) {
        const std::string m = j["method"].is_string() ? j["method"].get<std::string>() : "";
        if (m == "rk4_fixed") f.method = Method::rk4_fixed;
        else if (m == "rk45_adaptive") f.method = Method::rk45_adaptive;
        else throw ScenarioError("configs.flow.method: expected rk4_fixed or rk45_adaptive");
    }
    if (j.contains("boundary")) {
        const std::string b = j["boundary"].is_string() ? j["boundary"].get<std::string>() : "";
        if (b == "project") f.boundary = BoundaryPolicy::project;
        else if (b == "reject") f.boundary = BoundaryPolicy::reject;
        else throw ScenarioError("configs.flow.boundary: expected project or reject");
    }
    f.step = num_or(j, "step", f.step, "configs.flow");
    f.abs_tol = num_or(j, "abs_tol", f.abs_tol, "configs.flow");
    f.rel_tol = num_or(j, "rel_tol", f.rel_tol, "configs.flow");
    f.min_step = num_or(j, "min_step", f.min_step, "configs.flow");
    f.max_step = num_or(j, "max_step", f.max_step, "configs.flow");
    f.max_steps = static_cast<std::size_t>(num_or(j, "max_steps", static_cast<double>(f.max_steps), "configs.flow"));
    try {
        f.validate();
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(std::string("configs.flow: ") + e.what());
    }
    return f;
}

inline Settings parse_settings(const Json& c) {
    Settings s;
    only_keys(c, {"resolution", "flow", "index", "bracket", "dependency", "cycles", "area", "nelson", "permute",
                  "theorem_1_5b", "orbits"},
              "configs");
    s.resolution = static_cast<int>(num_or(c, "resolution", s.resolution, "configs"));
    if (s.resolution < 16) throw ScenarioError("configs.resolution: must be at least 16");
    if (c.contains("flow")) s.flow = parse_flow(c["flow"], s.flow);
    s.index.flow = s.flow;
    if (c.contains("index")) {
        const Json& j = c["index"];
        only_keys(j, {"tau_initial", "tau_min", "angle_step_max", "contour_refinement_limit", "min_segments"}, "configs.index");
        s.index.tau_initial = num_or(j, "tau_initial", s.index.tau_initial, "configs.index");
        s.index.tau_min = num_or(j, "tau_min", s.index.tau_min, "configs.index");
        s.index.angle_step_max = num_or(j, "angle_step_max", s.index.angle_step_max, "configs.index");
        s.index.contour_refinement_limit = static_cast<int>(num_or(j, "contour_refinement_limit", s.index.contour_refinement_limit, "configs.index"));
        s.index.min_segments = static_cast<int>(num_or(j, "min_segments", s.index.min_segments, "configs.index"));
    }
    try {
        s.index.validate();
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(std::string("configs.index: ") + e.what());
    }
    if (c.contains("bracket")) {
        only_keys(c["bracket"], {"tol"}, "configs.bracket");
        s.bracket_tol = num_or(c["bracket"], "tol", s.bracket_tol, "configs.bracket");
    }
    if (c.contains("dependency")) {
        only_keys(c["dependency"], {"tol", "resolution"}, "configs.dependency");
        s.dependency_tol = num_or(c["dependency"], "tol", s.dependency_tol, "configs.dependency");
        s.dependency_resolution = static_cast<int>(num_or(c["dependency"], "resolution", s.dependency_resolution, "configs.dependency"));
    }
    if (c.contains("cycles")) {
        const Json& j = c["cycles"];
        only_keys(j, {"seeds", "transient", "t_budget", "max_returns"}, "configs.cycles");
        if (j.contains("seeds")) s.cycle_seeds = to_points(j["seeds"], "configs.cycles.seeds");
        s.cycles.transient = num_or(j, "transient", s.cycles.transient, "configs.cycles");
        s.cycles.t_budget = num_or(j, "t_budget", s.cycles.t_budget, "configs.cycles");
        s.cycles.max_returns = static_cast<int>(num_or(j, "max_returns", s.cycles.max_returns, "configs.cycles"));
    }
    if (c.contains("area")) {
        only_keys(c["area"], {"probes", "t"}, "configs.area");
        if (c["area"].contains("probes")) s.area_probes = to_points(c["area"]["probes"], "configs.area.probes");
        s.area_t = num_or(c["area"], "t", s.area_t, "configs.area");
    }
    if (c.contains("nelson")) {
        const Json& j = c["nelson"];
        only_keys(j, {"p", "t", "ks"}, "configs.nelson");
        if (j.contains("p")) s.nelson_p = to_vec(j["p"], "configs.nelson.p");
        s.nelson_t = num_or(j, "t", s.nelson_t, "configs.nelson");
        if (j.contains("ks")) {
            s.nelson_ks.clear();
            for (const auto& k : j["ks"]) {
                if (!k.is_number_integer() || k.get<int>() < 1) throw ScenarioError("configs.nelson.ks: positive integers expected");
                s.nelson_ks.push_back(k.get<int>());
            }
        }
    }
    if (c.contains("permute")) {
        only_keys(c["permute"], {"samples", "t"}, "configs.permute");
        if (c["permute"].contains("samples")) s.permute_samples = to_points(c["permute"]["samples"], "configs.permute.samples");
        s.permute_t = num_or(c["permute"], "t", s.permute_t, "configs.permute");
    }
    if (c.contains("theorem_1_5b")) {
        only_keys(c["theorem_1_5b"], {"radii"}, "configs.theorem_1_5b");
        if (c["theorem_1_5b"].contains("radii")) {
            s.cycle_radii.clear();
            for (const auto& r : c["theorem_1_5b"]["radii"]) {
                if (!r.is_number() || !(r.get<double>() > 0.0)) throw ScenarioError("configs.theorem_1_5b.radii: positive numbers expected");
                s.cycle_radii.push_back(r.get<double>());
            }
        }
    }
    if (c.contains("orbits")) {
        only_keys(c["orbits"], {"seeds", "t"}, "configs.orbits");
        if (c["orbits"].contains("seeds")) s.orbit_seeds = to_points(c["orbits"]["seeds"], "configs.orbits.seeds");
        s.orbit_t = num_or(c["orbits"], "t", s.orbit_t, "configs.orbits");
    }
    return s;
}

inline bool needs_y(const std::string& check) {
    return check != "blocks" && check != "indices" && check != "euler";
}


inline Scenario load_scenario_unchecked(const Json& doc) {
    only_keys(doc, {"name", "description", "surface", "X", "Y", "candidates", "hypotheses", "checks", "configs", "expected"},
              "scenario");
    Scenario sc;
    sc.raw = doc;
    if (!doc.contains("name") || !doc["name"].is_string()) throw ScenarioError("scenario: missing 'name'");
    sc.name = doc["name"];
    if (!doc.contains("surface")) throw ScenarioError("scenario: missing 'surface'");
    sc.surface = parse_surface(doc["surface"]);
    if (!doc.contains("X")) throw ScenarioError("scenario: missing 'X'");

    auto builtin = [&](const Json& j, const char* which) -> std::optional<LimaPair> {
        if (!j.is_object()) return std::nullopt;
        only_keys(j, {"builtin", "steepness", "twist"}, which);
        if (!j.contains("builtin") || j["builtin"] != "lima") throw ScenarioError(std::string(which) + ": unknown builtin");
        const double k = num_or(j, "steepness", 1.0, which);
        const double w = num_or(j, "twist", 1.0, which);
        try {
            return build_lima_pair(k, w);
        } catch (const std::invalid_argument& e) {
            throw ScenarioError(std::string(which) + ": " + e.what());
        }
    };
    if (auto lp = builtin(doc["X"], "X")) {
        sc.lima = *lp;
        sc.X = lp->X;
    } else {
        sc.X = parse_field_or_throw(doc["X"], "X");
    }
    if (doc.contains("Y")) {
        if (auto lp = builtin(doc["Y"], "Y")) {
            if (!sc.lima) sc.lima = *lp;
            sc.Y = AnyField(sc.lima->Y);
        } else {
            sc.Y = AnyField(parse_field_or_throw(doc["Y"], "Y"));
        }
    } else if (sc.lima) {
        sc.Y = AnyField(sc.lima->Y);
    }
    if (doc.contains("candidates")) {
        if (!doc["candidates"].is_array()) throw ScenarioError("candidates: expected a list of field strings");
        for (const auto& c : doc["candidates"]) {
            FieldExpr f = parse_field_or_throw(c, "candidates");
            sc.candidates.emplace_back(c.get<std::string>(), std::move(f));
        }
    }
    if (doc.contains("hypotheses")) {
        if (!doc["hypotheses"].is_object()) throw ScenarioError("hypotheses: expected an object");
        for (const auto& [k, v] : doc["hypotheses"].items())
            if (!v.is_boolean()) throw ScenarioError("hypotheses." + k + ": expected a boolean");
        sc.hypotheses = doc["hypotheses"];
    }
    if (!doc.contains("checks") || !doc["checks"].is_array()) throw ScenarioError("scenario: missing 'checks' list");
    std::set<std::string> seen;
    for (const auto& c : doc["checks"]) {
        if (!c.is_string()) throw ScenarioError("checks: entries must be strings");
        const std::string k = c;
        const auto& kn = known_checks();
        if (std::find(kn.begin(), kn.end(), k) == kn.end()) throw ScenarioError("checks: unknown check '" + k + "'");
        if (!seen.insert(k).second) throw ScenarioError("checks: duplicate check '" + k + "'");
        if (needs_y(k) && !sc.Y) throw ScenarioError("checks: '" + k + "' needs a field Y");
        if (k == "lima_example" && !sc.lima) throw ScenarioError("checks: 'lima_example' needs the lima builtin");
        sc.checks.push_back(k);
    }
    sc.settings = parse_settings(doc.contains("configs") ? doc["configs"] : Json::object());
    if (doc.contains("expected")) {
        if (!doc["expected"].is_object()) throw ScenarioError("expected: expected an object");
        for (const auto& [path, v] : doc["expected"].items()) {
            const std::string head = path.substr(0, path.find('.'));
            if (!seen.count(head)) throw ScenarioError("expected: '" + path + "' refers to a check that is not run");
            if (v.is_object()) {
                for (const auto& [k, x] : v.items()) {
                    if (k != "min" && k != "max" && k != "approx" && k != "tol" && k != "nonempty")
                        throw ScenarioError("expected." + path + ": unknown comparator '" + k + "'");
                    (void)x;
                }
            }
        }
        sc.expected = doc["expected"];
    }
    return sc;
}

}  // namespace detail

/// Validates and loads a scenario document.
inline Scenario load_scenario(const Json& doc) {
    try {
        return detail::load_scenario_unchecked(doc);
    } catch (const Json::exception& e) {
        throw ScenarioError(std::string("scenario: ") + e.what());
    }
}

inline Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file " + path);
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ScenarioError(path + ": " + e.what());
    }
    return load_scenario(doc);
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << v;
    return os.str();
}

}  // namespace vfindex
