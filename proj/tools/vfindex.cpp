#include <algorithm>
#include <atomic>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "vfindex/export.hpp"

namespace fs = std::filesystem;
using namespace vfindex;

namespace {

enum Exit { kPass = 0, kAssertion = 1, kInput = 2, kInternal = 3 };

std::vector<double> split_numbers(const std::string& s, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ScenarioError(what + ": bad number '" + tok + "'");
        }
    }
    return out;
}

std::pair<std::string, std::vector<double>> kind_and_params(const std::string& arg, const std::string& what) {
    const auto colon = arg.find(':');
    if (colon == std::string::npos) return {arg, {}};
    return {arg.substr(0, colon), split_numbers(arg.substr(colon + 1), what)};
}

void expect_count(const std::vector<double>& v, std::size_t n, const std::string& what) {
    if (v.size() != n) throw ScenarioError(what + ": expected " + std::to_string(n) + " parameters");
}

// "disk[:cx,cy,r]", "annulus:cx,cy,rin,rout", "window:x0,x1,y0,y1",
// "rect:x0,y0,x1,y1", or an inline JSON object.
Surface surface_from_arg(const std::string& arg) {
    if (!arg.empty() && arg.front() == '{') {
        try {
            return parse_surface(Json::parse(arg));
        } catch (const Json::parse_error& e) {
            throw ScenarioError(std::string("--surface: ") + e.what());
        }
    }
    const auto [kind, v] = kind_and_params(arg, "--surface");
    try {
        if (kind == "disk") {
            if (v.empty()) return Surface::disk({0, 0}, 1.0);
            expect_count(v, 3, "--surface disk");
            return Surface::disk({v[0], v[1]}, v[2]);
        }
        if (kind == "annulus") {
            if (v.empty()) return Surface::annulus({0, 0}, 0.5, 1.5);
            expect_count(v, 4, "--surface annulus");
            return Surface::annulus({v[0], v[1]}, v[2], v[3]);
        }
        if (kind == "window") {
            expect_count(v, 4, "--surface window");
            return Surface::halfplane_window(v[0], v[1], v[2], v[3]);
        }
        if (kind == "rect") {
            expect_count(v, 4, "--surface rect");
            return Surface::rectangle({v[0], v[1]}, {v[2], v[3]});
        }
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(std::string("--surface: ") + e.what());
    }
    throw ScenarioError("--surface: unknown kind '" + kind + "'");
}

FieldExpr field_from_arg(const std::string& s) {
    try {
        return parse_field(s);
    } catch (const ParseError& e) {
        throw ScenarioError(std::string("--field: ") + e.what());
    }
}

Vec2 point_from_arg(const std::string& s, const std::string& what) {
    const auto v = split_numbers(s, what);
    expect_count(v, 2, what);
    return {v[0], v[1]};
}

void emit(const Json& j, const std::string& out) {
    const std::string text = j.dump(2) + "\n";
    if (out.empty()) std::cout << text;
    else write_atomic(out, text);
}

// Maps exceptions to exit codes; prints the message on stderr.
template <class F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const ScenarioError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const SurfaceError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}

int cmd_run(const std::string& file, const std::string& out) {
    return guarded([&] {
        const Json report = run_scenario(file);
        emit(report, out);
        return report["verdict"] == "pass" ? kPass : kAssertion;
    });
}

int cmd_batch(const std::string& dir, const std::string& out_dir, unsigned jobs) {
    std::vector<fs::path> files;
    if (!fs::is_directory(dir)) {
        std::cerr << "input error: '" << dir << "' is not a directory\n";
        return kInput;
    }
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (!out_dir.empty()) fs::create_directories(out_dir);

    struct Outcome {
        int code = kPass;
        std::string message;
    };
    std::vector<Outcome> results(files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next++) < files.size();) {
            Outcome& o = results[k];
            try {
                const Json report = run_scenario(files[k].string());
                o.code = report["verdict"] == "pass" ? kPass : kAssertion;
                o.message = report["verdict"].get<std::string>();
                if (!out_dir.empty())
                    write_atomic(fs::path(out_dir) / (files[k].stem().string() + ".report.json"), report.dump(2) + "\n");
            } catch (const ScenarioError& e) {
                o = {kInput, std::string("input error: ") + e.what()};
            } catch (const std::exception& e) {
                o = {kInternal, std::string("internal error: ") + e.what()};
            }
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(files.size(), 1))));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    int worst = kPass;
    for (std::size_t k = 0; k < files.size(); ++k) {
        std::cout << files[k].filename().string() << ": " << results[k].message << "\n";
        worst = std::max(worst, results[k].code);
    }
    return worst;
}

int cmd_index(const std::string& field, const std::string& surface, const std::string& region) {
    return guarded([&] {
        const FieldExpr X = field_from_arg(field);
        const Surface S = surface_from_arg(surface);
        const IndexConfig cfg;
        const auto [kind, v] = kind_and_params(region, "--region");
        IndexResult r;
        Json j;
        try {
            if (kind == "whole") {
                r = vector_field_index(X, S, S.enclosing_region(4.0 * S.bounding_box().extent() / kDefaultResolution), cfg);
            } else if (kind == "zero") {
                expect_count(v, 3, "--region zero");
                r = index_at_zero(X, {v[0], v[1]}, v[2], cfg);
            } else if (kind == "disk") {
                expect_count(v, 3, "--region disk");
                r = vector_field_index(X, S, Region::disk({v[0], v[1]}, v[2]), cfg);
            } else if (kind == "rect") {
                expect_count(v, 4, "--region rect");
                r = vector_field_index(X, S, Region::rect({v[0], v[1]}, {v[2], v[3]}), cfg);
            } else if (kind == "annulus") {
                expect_count(v, 4, "--region annulus");
                r = vector_field_index(X, S, Region::annulus({v[0], v[1]}, v[2], v[3]), cfg);
            } else {
                throw ScenarioError("--region: unknown kind '" + kind + "'");
            }
        } catch (const IndexError& e) {
            std::cerr << "index error: " << e.what() << "\n";
            return kAssertion;
        }
        j = to_json(r);
        j["field"] = X.to_string();
        j["surface"] = S.kind_name();
        emit(j, "");
        return kPass;
    });
}

int cmd_zeros(const std::string& field, const std::string& surface, int resolution) {
    return guarded([&] {
        const FieldExpr X = field_from_arg(field);
        const Surface S = surface_from_arg(surface);
        if (resolution < 16) throw ScenarioError("--resolution must be at least 16");
        const ZeroScan zs = find_zeros(X, S, resolution);
        Json j;
        j["zeros"] = Json::array();
        for (Vec2 z : zs.zeros) j["zeros"].push_back(to_json(z));
        j["suspect_cells"] = zs.suspect_cells.size();
        j["zero_cells"] = zs.zero_cells.size();
        emit(j, "");
        return kPass;
    });
}

int cmd_cycles(const std::string& field, const std::string& surface, const std::vector<std::string>& seeds) {
    return guarded([&] {
        const FieldExpr Y = field_from_arg(field);
        const Surface S = surface_from_arg(surface);
        std::vector<Vec2> pts;
        for (const auto& s : seeds) pts.push_back(point_from_arg(s, "--seed"));
        const auto cs = detect_cycles(Y, S, pts, FlowConfig{}, CycleOptions{});
        Json j;
        j["count"] = cs.size();
        j["cycles"] = Json::array();
        for (const Cycle& c : cs)
            j["cycles"].push_back({{"period", c.period}, {"closure_gap", c.closure_gap}, {"start", to_json(c.orbit.front())}});
        emit(j, "");
        return kPass;
    });
}

int cmd_export(const std::string& file, const std::string& section, const std::string& out) {
    return guarded([&] {
        const Scenario sc = load_scenario_file(file);
        Runner runner(sc);
        const std::string csv = export_csv(runner, section);
        if (out.empty()) std::cout << csv;
        else write_atomic(out, csv);
        return kPass;
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Index and dependency-set verification for planar vector fields"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::string file, out, dir, field, surface = "disk", region = "whole", section;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    int resolution = kDefaultResolution;
    std::vector<std::string> seeds;

    auto* run = app.add_subcommand("run", "Run one scenario and print its report");
    run->add_option("scenario", file, "Scenario JSON file")->required();
    run->add_option("--out", out, "Write the report here instead of stdout");

    auto* batch = app.add_subcommand("batch", "Run every *.json scenario in a directory");
    batch->add_option("dir", dir, "Scenario directory")->required();
    batch->add_option("--out", out, "Directory for per-scenario reports");
    batch->add_option("--jobs", jobs, "Concurrent scenarios")->check(CLI::PositiveNumber);

    auto* index = app.add_subcommand("index", "Vector-field index over a region");
    index->add_option("--field", field, "Field \"(fx, fy)\"")->required();
    index->add_option("--surface", surface, "disk|annulus|window|rect[:params] or JSON");
    index->add_option("--region", region, "whole|disk:cx,cy,r|rect:x0,y0,x1,y1|annulus:cx,cy,rin,rout|zero:x,y,r");

    auto* zeros = app.add_subcommand("zeros", "Locate zeros of a field on a surface");
    zeros->add_option("--field", field, "Field \"(fx, fy)\"")->required();
    zeros->add_option("--surface", surface, "disk|annulus|window|rect[:params] or JSON");
    zeros->add_option("--resolution", resolution, "Grid cells per side");

    auto* cycles = app.add_subcommand("cycles", "Detect periodic orbits from seeds");
    cycles->add_option("--field", field, "Field \"(fx, fy)\"")->required();
    cycles->add_option("--surface", surface, "disk|annulus|window|rect[:params] or JSON");
    cycles->add_option("--seed", seeds, "Seed point x,y (repeatable)")->required();

    auto* exp = app.add_subcommand("export", "Write plot data of a scenario as CSV");
    exp->add_option("scenario", file, "Scenario JSON file")->required();
    exp->add_option("--section", section, "contours|zero_cells|dependency|cycles|orbits")->required();
    exp->add_option("--out", out, "CSV path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kInput;
    }

    if (*run) return cmd_run(file, out);
    if (*batch) return cmd_batch(dir, out, jobs);
    if (*index) return cmd_index(field, surface, region);
    if (*zeros) return cmd_zeros(field, surface, resolution);
    if (*cycles) return cmd_cycles(field, surface, seeds);
    if (*exp) return cmd_export(file, section, out);
    return kInput;
}
