#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "vfindex/export.hpp"
#include "vfindex/runner.hpp"

using namespace vfindex;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = VFINDEX_SCENARIOS;

Json base() {
    return Json::parse(R"J({
        "name": "t",
        "surface": {"kind": "disk", "center": [0, 0], "radius": 1},
        "X": "(-y, x)",
        "Y": "(-x, -y)",
        "checks": ["blocks"]
    })J");
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / "vfindex_test_cli";
    fs::create_directories(d);
    return d / name;
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cli(const std::string& args) {
    const std::string cmd = std::string("\"") + VFINDEX_CLI + "\" " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("scenario validation rejects malformed documents") {
    CHECK_NOTHROW(load_scenario(base()));
    const std::vector<std::pair<std::string, Json>> bad{
        {"/name", nullptr},
        {"/X", "(x, "},
        {"/checks", Json::array({"no_such_check"})},
        {"/checks", Json::array({"blocks", "blocks"})},
        {"/surface", Json{{"kind", "torus"}}},
        {"/surface", Json{{"kind", "disk"}, {"center", {0, 0}}, {"radius", -1}}},
        {"/expected", Json{{"euler.equal", true}}},
        {"/expected", Json{{"blocks.count", Json{{"near", 1}}}}},
        {"/hypotheses", Json{{"analytic", "yes"}}},
        {"/extra", 1},
    };
    for (const auto& [ptr, value] : bad) {
        Json doc = base();
        if (value.is_null())
            doc.erase(ptr.substr(1));
        else
            doc[Json::json_pointer(ptr)] = value;
        INFO(doc.dump());
        CHECK_THROWS_AS(load_scenario(doc), ScenarioError);
    }
    Json no_y = base();
    no_y.erase("Y");
    no_y["checks"] = Json::array({"dependency"});
    CHECK_THROWS_AS(load_scenario(no_y), ScenarioError);
    Json lima_needed = base();
    lima_needed["checks"] = Json::array({"lima_example"});
    CHECK_THROWS_AS(load_scenario(lima_needed), ScenarioError);
}

TEST_CASE("reports are deterministic") {
    const Scenario sc = load_scenario_file((kScenarios / "two_zeros.json").string());
    const Json a = run_scenario(sc), b = run_scenario(sc);
    CHECK(a.dump() == b.dump());
    CHECK(a["provenance"]["config_hash"] == b["provenance"]["config_hash"]);
    CHECK(a["provenance"]["version"] == kVersion);
}

TEST_CASE("every bundled scenario passes") {
    int n = 0;
    for (const auto& e : fs::directory_iterator(kScenarios)) {
        if (e.path().extension() != ".json") continue;
        ++n;
        INFO(e.path().filename().string());
        const Json r = run_scenario(e.path().string());
        for (const auto& a : r["assertions"]) {
            INFO(a.dump());
            CHECK(a["pass"].get<bool>());
        }
        CHECK(r["verdict"] == "pass");
    }
    CHECK(n >= 5);
}

TEST_CASE("assertion comparators") {
    Json doc = base();
    doc["checks"] = Json::array({"blocks", "euler"});
    doc["expected"] = {{"blocks.count", {{"min", 1}, {"max", 1}}},
                       {"blocks.indices", {{"nonempty", true}}},
                       {"euler.euler_characteristic", {{"approx", 1.0}, {"tol", 1e-12}}},
                       {"euler.equal", true}};
    const Json r = run_scenario(load_scenario(doc));
    CHECK(r["verdict"] == "pass");
    CHECK(r["assertions"].size() == 4);

    doc["expected"] = {{"blocks.count", 2}};
    CHECK(run_scenario(load_scenario(doc))["verdict"] == "fail");
    doc["expected"] = {{"blocks.no_such_key", 2}};
    CHECK(run_scenario(load_scenario(doc))["verdict"] == "fail");
}

TEST_CASE("a flagged theorem does not fail the report") {
    const Json r = run_scenario((kScenarios / "lima.json").string());
    CHECK(r["checks"]["theorem_1_5a"]["verdict"] == "flag");
    CHECK(r["verdict"] == "pass");
}

TEST_CASE("export: cycles header only when there are none") {
    Runner run(load_scenario_file((kScenarios / "rotation_radial.json").string()));
    const std::string csv = export_csv(run, "cycles");
    CHECK(csv == "cycle,vertex,x,y\n");
}

TEST_CASE("export: the lima block contour is closed") {
    Runner run(load_scenario_file((kScenarios / "lima.json").string()));
    const auto ls = lines(export_csv(run, "contours"));
    REQUIRE(ls.size() > 3);
    CHECK(ls[0] == "block,contour,vertex,x,y");
    std::map<std::string, std::vector<std::string>> by_contour;
    for (std::size_t k = 1; k < ls.size(); ++k) {
        const std::string& l = ls[k];
        const auto c1 = l.find(','), c2 = l.find(',', c1 + 1), c3 = l.find(',', c2 + 1);
        by_contour[l.substr(0, c2)].push_back(l.substr(c3 + 1));
    }
    CHECK(by_contour.size() == 2);  // outer and inner loop of the collar
    for (const auto& [key, pts] : by_contour) {
        INFO(key);
        REQUIRE(pts.size() > 3);
        CHECK(pts.front() == pts.back());
    }
}

TEST_CASE("export: dependency cells cluster at the origin") {
    Runner run(load_scenario_file((kScenarios / "rotation_radial.json").string()));
    const auto ls = lines(export_csv(run, "dependency"));
    REQUIRE(ls.size() > 1);
    CHECK(ls[0] == "i,j,x,y");
    for (std::size_t k = 1; k < ls.size(); ++k) {
        std::istringstream in(ls[k]);
        std::string i, j, x, y;
        std::getline(in, i, ',');
        std::getline(in, j, ',');
        std::getline(in, x, ',');
        std::getline(in, y, ',');
        CHECK(std::hypot(std::stod(x), std::stod(y)) < 0.05);
    }
}

TEST_CASE("export rejects unknown sections") {
    Runner run(load_scenario_file((kScenarios / "rotation_radial.json").string()));
    CHECK_THROWS_AS(export_csv(run, "nope"), ScenarioError);
}

TEST_CASE("write_atomic replaces the target") {
    const fs::path p = scratch("atomic.txt");
    write_atomic(p, "one");
    write_atomic(p, "two");
    CHECK(slurp(p) == "two");
    CHECK_FALSE(fs::exists(p.string() + ".tmp"));
}

TEST_CASE("cli exit codes") {
    const std::string good = (kScenarios / "two_zeros.json").string();
    CHECK(cli("run \"" + good + "\"") == 0);
    CHECK(cli("--version") == 0);

    Json failing = Json::parse(slurp(good));
    failing["expected"] = {{"blocks.count", 7}};
    const fs::path f = scratch("failing.json");
    write(f, failing.dump());
    CHECK(cli("run \"" + f.string() + "\"") == 1);

    const fs::path broken = scratch("broken.json");
    write(broken, "{\"name\": ");
    CHECK(cli("run \"" + broken.string() + "\"") == 2);
    CHECK(cli("run \"" + scratch("missing.json").string() + "\"") == 2);
    CHECK(cli("index --field \"(x, \" --surface disk --region whole") == 2);
    CHECK(cli("index --field \"(x, y)\" --surface disk --region zero:0.05,0,0.3") == 1);
    CHECK(cli("index --field \"(-x, -y)\" --surface disk --region whole") == 0);
    CHECK(cli("zeros --field \"(x^2 - 0.25, y)\" --surface disk") == 0);
}

TEST_CASE("cli run writes the report") {
    const fs::path out = scratch("report.json");
    fs::remove(out);
    REQUIRE(cli("run \"" + (kScenarios / "two_zeros.json").string() + "\" --out \"" + out.string() + "\"") == 0);
    const Json r = Json::parse(slurp(out));
    CHECK(r["scenario"] == "two_zeros");
    CHECK(r["verdict"] == "pass");
}

TEST_CASE("cli batch runs a directory") {
    const fs::path dir = scratch("batch");
    fs::remove_all(dir);
    fs::create_directories(dir / "in");
    fs::copy_file(kScenarios / "two_zeros.json", dir / "in" / "a.json");
    fs::copy_file(kScenarios / "rotation_radial.json", dir / "in" / "b.json");
    CHECK(cli("batch \"" + (dir / "in").string() + "\" --out \"" + (dir / "out").string() + "\" --jobs 2") == 0);
    CHECK(fs::exists(dir / "out" / "a.report.json"));
    CHECK(fs::exists(dir / "out" / "b.report.json"));
    write(dir / "in" / "c.json", "[]");
    CHECK(cli("batch \"" + (dir / "in").string() + "\"") == 2);
}

TEST_CASE("cli export writes csv") {
    const fs::path out = scratch("zero_cells.csv");
    fs::remove(out);
    REQUIRE(cli("export \"" + (kScenarios / "two_zeros.json").string() + "\" --section zero_cells --out \"" + out.string() + "\"") == 0);
    CHECK(slurp(out).rfind("i,j,x,y\n", 0) == 0);
}
