#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rlc/cli.hpp"
#include "rlc/error.hpp"
#include "rlc/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rlc;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = 0;
    std::string out, err;
    io::Json json() const { return io::Json::parse(out); }
};

Run invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "rlc");
    std::ostringstream out, err;
    Run r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "rlc_io_cli_test" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// A wall with one noisy gap: every route to the goal is risky.
const char* gap_scenario = R"({
  "format": 1,
  "workspace": {"lo": [0, 0], "hi": [1, 1]},
  "cspace": {"lo": [0, 0], "hi": [1, 1]},
  "robot": {"type": "discs", "radii": [0.015]},
  "obstacles": [
    {"shape": "rect", "width": 0.03, "height": 0.46, "position": [0.5, 0.12], "std": [0, 0.02]},
    {"shape": "rect", "width": 0.03, "height": 0.66, "position": [0.5, 0.82], "std": [0, 0.02]}
  ],
  "start": [0.2, 0.4],
  "goal": [0.8, 0.4],
  "endgame_radius": 0.01,
  "step_size": 0.01,
  "max_steps": 400,
  "controller": {"kind": "straight_line", "actuation_noise_std": 0.001}
})";

fs::path write_gap(const fs::path& dir) {
    const auto p = dir / "gap.json";
    std::ofstream(p) << gap_scenario;
    return p;
}

std::string slurp(const fs::path& p) { return io::read_file(p); }

/// Minimal well-formedness check: every opened element is closed in order.
bool balanced_xml(const std::string& s) {
    std::vector<std::string> stack;
    std::size_t i = 0;
    while ((i = s.find('<', i)) != std::string::npos) {
        const auto end = s.find('>', i);
        if (end == std::string::npos) return false;
        const std::string tag = s.substr(i + 1, end - i - 1);
        i = end + 1;
        if (tag.empty() || tag[0] == '?' || tag[0] == '!') continue;
        if (tag.back() == '/') continue;
        const auto name_end = tag.find_first_of(" \t\n");
        if (tag[0] == '/') {
            if (stack.empty() || stack.back() != tag.substr(1)) return false;
            stack.pop_back();
        } else {
            stack.push_back(tag.substr(0, name_end));
        }
    }
    return stack.empty();
}

int count(const std::string& hay, const std::string& needle) {
    int n = 0;
    for (std::size_t i = hay.find(needle); i != std::string::npos; i = hay.find(needle, i + 1)) ++n;
    return n;
}

} // namespace

TEST_CASE("validate reports the robot dimension") {
    const auto dir = scratch("validate");
    const auto r = invoke({"validate", "--scenario", write_gap(dir).string()});
    CHECK(r.code == 0);
    CHECK(r.json()["dof"] == 2);
}

TEST_CASE("missing scenario is an I/O error with no output file") {
    const auto dir = scratch("missing");
    const auto out = dir / "roadmap.json";
    const auto r = invoke({"build", "--scenario", (dir / "nope.json").string(), "--out", out.string()});
    CHECK(r.code == 6);
    CHECK(r.json()["status"] == "io");
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("out-of-domain parameters are rejected before any work") {
    const auto dir = scratch("domain");
    const auto scn = write_gap(dir).string();
    const auto out = dir / "roadmap.json";
    CHECK(invoke({"build", "--scenario", scn, "--out", out.string(), "--gamma", "1.5"}).code == 2);
    CHECK(invoke({"build", "--scenario", scn, "--out", out.string(), "--k", "0"}).code == 2);
    CHECK(invoke({"build", "--scenario", scn, "--out", out.string(), "--bound-mode", "loose"}).code == 2);
    CHECK(invoke({"frobnicate"}).code == 2);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("malformed scenario is a validation error") {
    const auto dir = scratch("malformed");
    std::ofstream(dir / "bad.json") << R"({"format": 1, "workspace": 3})";
    std::ofstream(dir / "trunc.json") << R"({"format": 1, )";
    CHECK(invoke({"validate", "--scenario", (dir / "bad.json").string()}).code == 2);
    CHECK(invoke({"validate", "--scenario", (dir / "trunc.json").string()}).code == 2);
}

TEST_CASE("scenario documents round trip") {
    const auto doc = io::Json::parse(gap_scenario);
    const auto file = io::scenario_from_json(doc);
    const auto again = io::to_json(file);
    CHECK(io::to_json(io::scenario_from_json(again)).dump() == again.dump());
    CHECK(file.scenario.obstacles.size() == 2);
    CHECK(file.controller.actuation_noise_std == 0.001);
}

TEST_CASE("build, plan and render on the gap scenario") {
    const auto dir = scratch("plan");
    const auto scn = write_gap(dir).string();
    const auto rm = (dir / "roadmap.json").string();
    const auto rm2 = (dir / "roadmap2.json").string();
    const std::vector<std::string> build{"build", "--scenario", scn, "--n", "300", "--k", "8", "--trials", "60",
                                         "--seed", "5"};
    auto b1 = build, b2 = build;
    b1.insert(b1.end(), {"--out", rm});
    b2.insert(b2.end(), {"--out", rm2});
    const auto first = invoke(b1);
    REQUIRE(first.code == 0);
    REQUIRE(invoke(b2).code == 0);
    CHECK(slurp(rm) == slurp(rm2));
    const auto summary = first.json();
    CHECK(summary["milestones"] == 299);
    int total = 0;
    for (int c : summary["histogram"]["counts"]) total += c;
    CHECK(total == summary["edges"].get<int>());
    CHECK(summary["histogram"]["edges_below_one"].get<int>() > 0);

    SUBCASE("roadmap file round trips and rejects tampering") {
        const auto r = io::load_roadmap(rm);
        CHECK(io::to_json(r).dump(2) + "\n" == slurp(rm));
        auto doc = io::read_json(rm);
        doc["edges"][0]["p_lower"] = 0.123456;
        CHECK_THROWS_AS(io::roadmap_from_json(doc), Error);
    }

    SUBCASE("max-prob plan and infeasible constraint") {
        const auto plan = invoke({"plan", "--scenario", scn, "--roadmap", rm});
        REQUIRE(plan.code == 0);
        const double bound = plan.json()["success_lower_bound"];
        CHECK(bound < 1.0);
        CHECK(bound > 0.0);
        const auto inf = invoke({"plan", "--scenario", scn, "--roadmap", rm, "--p-min",
                              std::to_string(std::min(0.999, bound + 0.5 * (1 - bound)))});
        CHECK(inf.code == 4);
        CHECK(inf.json()["status"] == "infeasible");
        CHECK(inf.json()["best_achievable"].get<double>() == doctest::Approx(bound));
    }

    SUBCASE("sweep gives one record per value with nondecreasing cost") {
        const auto sw = invoke({"plan", "--scenario", scn, "--roadmap", rm, "--sweep", "0.05,0.1,0.2,0.3,0.99"});
        REQUIRE(sw.code == 0);
        const auto arr = sw.json();
        REQUIRE(arr.size() == 5);
        double last = 0.0;
        for (const auto& rec : arr) {
            if (rec["status"] != "ok") continue;
            CHECK(rec["cost"].get<double>() >= last - 1e-12);
            CHECK(rec["success_lower_bound"].get<double>() >= rec["p_min"].get<double>() * (1 - 1e-12));
            last = rec["cost"];
        }
        CHECK(arr[4]["status"] == "infeasible");
    }

    SUBCASE("render draws one path element per planned path") {
        const auto svg = dir / "plan.svg";
        const auto sw = invoke({"plan", "--scenario", scn, "--roadmap", rm, "--sweep", "0.05,0.2", "--render",
                             svg.string()});
        REQUIRE(sw.code == 0);
        int ok = 0;
        for (const auto& rec : sw.json()) ok += rec["status"] == "ok";
        const auto text = slurp(svg);
        CHECK(balanced_xml(text));
        CHECK(count(text, "class=\"planned-path\"") == ok);
        CHECK(count(text, "fill-opacity") == 2);
    }

    SUBCASE("plan output is reproducible") {
        const std::vector<std::string> args{"plan", "--scenario", scn, "--roadmap", rm, "--p-min", "0.1",
                                            "--execute", "50"};
        const auto a = invoke(args), b = invoke(args);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("mdp estimate and solve") {
    const auto dir = scratch("mdp");
    const auto scn = write_gap(dir).string();
    const auto est = (dir / "est.json").string();
    const auto e = invoke({"mdp", "estimate", "--scenario", scn, "--n", "2", "--actions", "1", "--trials", "40", "--alpha",
                        "0.9", "--seed", "2", "--out", est});
    REQUIRE(e.code == 0);
    CHECK(e.json()["states"] == 2);

    const auto s1 = invoke({"mdp", "solve", "--estimate", est, "--mode", "interval"});
    const auto s2 = invoke({"mdp", "solve", "--estimate", est, "--mode", "interval"});
    REQUIRE(s1.code == 0);
    CHECK(s1.out == s2.out);
    const auto sol = s1.json();
    REQUIRE(sol["policy"].size() == 2);
    for (int a : sol["policy"]) {
        CHECK(a >= 0);
        CHECK(a < e.json()["actions"].get<int>());
    }
    for (int i = 0; i < 2; ++i) CHECK(sol["V_lo"][i].get<double>() <= sol["V_hi"][i].get<double>() + 1e-12);

    const auto point = invoke({"mdp", "solve", "--estimate", est, "--mode", "interval", "--gamma", "0.5"}).json();
    const auto nominal = invoke({"mdp", "solve", "--estimate", est, "--mode", "nominal"}).json();
    for (int i = 0; i < 2; ++i) {
        CHECK(point["V_hi"][i].get<double>() == doctest::Approx(nominal["V"][i].get<double>()).epsilon(1e-12));
        CHECK(point["V_lo"][i].get<double>() == doctest::Approx(nominal["V"][i].get<double>()).epsilon(1e-12));
    }
    CHECK(point["policy"] == nominal["policy"]);

    const auto ell = invoke({"mdp", "solve", "--estimate", est, "--mode", "ellipsoid", "--verbose"});
    REQUIRE(ell.code == 0);
    CHECK(ell.json()["residuals"].size() == ell.json()["iterations"].get<std::size_t>());

    const auto reloaded = io::estimate_from_json(io::read_json(est));
    CHECK(reloaded.states == 2);
    CHECK(reloaded.records[0][0].size() == 40);
}

TEST_CASE("bound prints the milestone count") {
    auto r = invoke({"bound", "--epsilon", "0.5", "--alpha", "0.5", "--beta", "0.5", "--gamma", "0.1"});
    CHECK(r.code == 0);
    CHECK(r.out == "384\n");
    r = invoke({"bound", "--epsilon", "1", "--alpha", "1", "--beta", "1", "--gamma", "1"});
    CHECK(r.out == "42\n");
    CHECK(invoke({"bound", "--epsilon", "0", "--alpha", "1", "--beta", "1", "--gamma", "1"}).code == 2);
}

TEST_CASE("atomic writes leave no temporary files behind") {
    const auto dir = scratch("atomic");
    io::write_file_atomic(dir / "a.txt", "hello");
    io::write_file_atomic(dir / "a.txt", "world");
    CHECK(slurp(dir / "a.txt") == "world");
    int files = 0;
    for (const auto& entry : fs::directory_iterator(dir)) files += entry.is_regular_file();
    CHECK(files == 1);
    CHECK_THROWS_AS(io::write_file_atomic(dir / "no" / "such" / "dir.txt", "x"), Error);
}
