#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "moment/cli/commands.hpp"
#include "moment/proof/runner.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = moment::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "moment_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double max_residual(const std::vector<std::string>& args) {
    auto r = call(args);
    REQUIRE(r.code == 0);
    return json::parse(r.out)["max_abs_residual"].get<double>();
}

}  // namespace

TEST_CASE("verify exit codes") {
    auto report = scratch("t1-zero.json");
    auto r = call({"verify", "--theorem", "t1-zero", "--out", report.string()});
    REQUIRE(r.code == 0);
    auto j = json::parse(slurp(report));
    REQUIRE(j["reports"].size() == 5);
    for (const auto& e : j["reports"]) REQUIRE(e["status"] == "pass");
    REQUIRE_FALSE(fs::exists(report.string() + ".tmp"));

    REQUIRE(call({"verify", "--theorem", "bogus"}).code == 2);
    REQUIRE(call({"verify", "--theorem", "t3", "--expected", "/nonexistent.json"}).code == 2);
    REQUIRE(call({"verify", "--theorem", "t3"}).code == 0);
    REQUIRE(call({"verify"}).code == 2);
}

TEST_CASE("verify rejects a mutated script") {
    for (std::string name : {"t3", "t1-nonzero"}) {
        auto script = moment::proof::load_script(std::string(MOMENT_DATA_DIR) + "/scripts/" + name + ".json");
        std::vector<std::size_t> all(script.checks.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        auto m = moment::proof::sample_mutations(script, all, 1, 3).at(0);
        for (auto& [slot, text] : script.checks[m.check_index].expected)
            if (slot == m.slot) text = m.mutated;
        auto path = scratch("mutated-" + name + ".json");
        std::ofstream(path) << moment::proof::dump_script(script);
        auto r = call({"verify", "--theorem", name, "--expected", path.string(), "--format", "json"});
        REQUIRE(r.code == 1);
        REQUIRE(json::parse(r.out)["reports"][m.check_index]["status"] == "fail");
    }
}

TEST_CASE("residual grids") {
    REQUIRE(max_residual({"residual", "--surface", "sphere r=1 center=0,0,0", "--alpha", "-2", "--grid", "32", "--format", "json"}) <= 1e-10);
    REQUIRE(max_residual({"residual", "--surface", "cylinder r=1", "--alpha", "-2", "--grid", "32", "--format", "json"}) >= 0.5);
    REQUIRE(max_residual({"residual", "--surface", "plane n=0,0,1", "--alpha", "7", "--grid", "32", "--format", "json"}) <= 1e-12);

    auto csv = scratch("sphere.csv");
    auto r = call({"residual", "--surface", "sphere r=1 center=0,0,1", "--alpha", "-4", "--grid", "8", "--out", csv.string()});
    REQUIRE(r.code == 0);
    std::istringstream lines(slurp(csv));
    std::string line;
    std::getline(lines, line);
    REQUIRE(line == "u,v,x,y,z,H,K,residual");
    int rows = 0;
    while (std::getline(lines, line)) {
        REQUIRE(std::count(line.begin(), line.end(), ',') == 7);
        REQUIRE(std::abs(std::stod(line.substr(line.rfind(',') + 1))) <= 1e-10);
        ++rows;
    }
    REQUIRE(rows == 64);

    // An odd grid on [-1,1]^2 puts its middle node on the origin.
    auto j = json::parse(call({"residual", "--surface", "plane n=0,0,1", "--alpha", "-1", "--grid", "3", "--format", "json"}).out);
    REQUIRE(j["skipped"] == 1);
    REQUIRE(j["nodes"] == 8);
}

TEST_CASE("energy, variation, shoot and euler wrappers") {
    auto e = json::parse(call({"energy", "--surface", "sphere r=1", "--alpha", "-2", "--format", "json"}).out);
    REQUIRE(std::abs(e["energy"].get<double>() - 4 * M_PI) <= 1e-8);

    auto v = json::parse(call({"variation", "--surface", "sphere r=1", "--alpha", "-1", "--field", "one", "--format", "json"}).out);
    REQUIRE(std::abs(v["runs"][0]["variation"].get<double>() - 4 * M_PI) <= 1e-4);
    v = json::parse(call({"variation", "--surface", "sphere r=1", "--alpha", "-2", "--count", "2", "--seed", "9", "--format", "json"}).out);
    REQUIRE(v["runs"].size() == 2);
    REQUIRE(v["runs"][1]["seed"] == 10);
    REQUIRE(v["max_abs_variation"].get<double>() <= 1e-5);

    auto profile = scratch("profile.csv");
    REQUIRE(call({"shoot", "--alpha", "-2", "--start", "0,-1,0", "--out", profile.string()}).code == 0);
    std::istringstream lines(slurp(profile));
    std::string line;
    std::getline(lines, line);
    REQUIRE(line == "s,f,z,theta");
    double worst = 0, last = 0;
    while (std::getline(lines, line)) {
        double s, f, z, t;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &s, &f, &z, &t) == 4);
        worst = std::max({worst, std::abs(f - std::sin(s)), std::abs(z + std::cos(s))});
        last = s;
    }
    REQUIRE(worst <= 1e-6);
    REQUIRE(std::abs(last - (M_PI - 0.1)) < 1e-12);

    REQUIRE(max_residual({"euler", "--alpha", "2", "--curve", "sec3", "--format", "json"}) <= 1e-8);
    auto h = json::parse(call({"euler", "--alpha", "0.5", "--curve", "hyperbola", "--format", "json"}).out);
    REQUIRE(h["max_abs_el_literal"] == 0.0);
    REQUIRE(h.contains("oracle_max_abs_diff"));
    auto csv = call({"euler", "--alpha", "1", "--curve", "hyperbola", "--samples", "5", "--format", "csv"});
    REQUIRE(csv.out.rfind("theta,r,residual,el_arc_length,el_literal\n", 0) == 0);
    REQUIRE(std::count(csv.out.begin(), csv.out.end(), '\n') == 6);
}

TEST_CASE("usage errors and help") {
    REQUIRE(call({}).code == 2);
    REQUIRE(call({"residual", "--surface", "sphere r=1", "--alpha", "1", "--bogus"}).code == 2);
    REQUIRE(call({"residual", "--surface", "cone r=1", "--alpha", "1"}).code == 2);
    REQUIRE(call({"energy", "--surface", "sphere r=1", "--alpha", "1", "--format", "csv"}).code == 2);
    REQUIRE(call({"euler", "--alpha", "1", "--curve", "hyperbola", "--hi", "2"}).code == 2);
    REQUIRE(call({"shoot", "--alpha", "-2", "--start", "0,-1,0.5"}).code == 2);
    auto help = call({"residual", "--help"});
    REQUIRE(help.code == 0);
    REQUIRE(help.out.find("32") != std::string::npos);
}

TEST_CASE("outputs are deterministic") {
    std::vector<std::string> args{"residual", "--surface", "cylinder r=1 dir=1,1,0", "--alpha", "-3", "--grid", "6", "--format", "csv"};
    REQUIRE(call(args).out == call(args).out);
    std::vector<std::string> var{"variation", "--surface", "sphere r=1", "--alpha", "0", "--seed", "4", "--format", "json"};
    REQUIRE(call(var).out == call(var).out);
}
