#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "ggm/cli.hpp"
#include "ggm/io.hpp"

namespace fs = std::filesystem;
using namespace ggm;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("ggm_cli_test_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const fs::path& out, std::vector<std::string> args) {
    args.insert(args.begin(), {"--out", out.string()});
    return cli::dispatch(args);
}

void write_function(const fs::path& p, const std::vector<double>& v) {
    io::write_json(p, io::function_to_json(v));
}

}  // namespace

TEST_CASE("space files round trip") {
    TempDir t;
    const auto spaces = {uniform_grid(5), snowflake_grid(6, 0.5), two_atom_space(1.0, 3.0),
                         build_matrix_space({{0, 2, 1}, {1, 0, 1}, {1, 1, 0}}, {0.5, 1.0, 2.0})};
    for (const auto& s : spaces) {
        const auto p = t.path / "s.space.json";
        io::write_json(p, io::space_to_json(s));
        const auto back = io::space_from_json(io::read_json(p));
        REQUIRE(back.size() == s.size());
        for (std::size_t x = 0; x < s.size(); ++x) {
            CHECK(back.weight(x) == s.weight(x));
            for (std::size_t y = 0; y < s.size(); ++y) CHECK(back.dist(x, y) == s.dist(x, y));
        }
        CHECK(io::space_to_json(back).dump() == io::space_to_json(s).dump());
    }
    CHECK_THROWS(io::space_from_json(io::Json::parse(R"({"points": [[0], [1]]})")));
}

TEST_CASE("space build and analyze") {
    TempDir t;
    CHECK(run(t.path, {"space", "build", "grid4", "--grid", "4"}) == 0);
    const auto sp = t.path / "grid4.space.json";
    REQUIRE(fs::exists(sp));
    CHECK(io::space_from_json(io::read_json(sp)).size() == 4);
    CHECK(run(t.path, {"space", "analyze", sp.string()}) == 0);
    const auto geo = io::read_json(t.path / "grid4.geometry.json");
    CHECK(geo["C_t"].get<double>() == doctest::Approx(1.0));
    CHECK(geo["C_s"].get<double>() == 1.0);
    CHECK(geo["C_d"].get<double>() == doctest::Approx(3.0));

    CHECK(run(t.path, {"space", "build", "flake", "--snowflake-grid", "8", "--exponent", "0.5"}) == 0);
    CHECK(run(t.path, {"space", "build", "atoms", "--two-atom", "1,10"}) == 0);
    CHECK(run(t.path, {"space", "build", "eq", "--equilateral", "5", "--weight", "2"}) == 0);
    CHECK(io::space_from_json(io::read_json(t.path / "eq.space.json")).total_measure() == doctest::Approx(10.0));
}

TEST_CASE("norm eval and op apply") {
    TempDir t;
    REQUIRE(run(t.path, {"space", "build", "grid4", "--grid", "4"}) == 0);
    const auto sp = (t.path / "grid4.space.json").string();
    const auto fn = t.path / "f.fn";
    write_function(fn, {1.0, 2.0, 0.0, -1.0});
    CHECK(run(t.path, {"norm", "eval", "--norm", "grand-morrey", "--p", "2", "--lambda", "0.3", "--phi", "pow:1",
                       "--A", "lin:1", fn.string(), sp}) == 0);
    const auto gm = io::read_json(t.path / "norm_grand-morrey.json");
    CHECK(gm.at("result").at("value").get<double>() > 0.0);

    CHECK(run(t.path, {"norm", "eval", "--norm", "lebesgue", "--p", "2", fn.string(), sp}) == 0);
    const auto leb = io::read_json(t.path / "norm_lebesgue.json");
    CHECK(leb.at("result").at("value").get<double>() == doctest::Approx(std::sqrt(6.0 / 4.0)).epsilon(1e-14));

    CHECK(run(t.path, {"op", "apply", "--op", "maximal", fn.string(), sp}) == 0);
    const auto mf = io::function_from_json(io::read_json(t.path / "op_maximal.json"));
    CHECK(mf.size() == 4);
    CHECK(mf[1] >= 2.0);
    CHECK(run(t.path, {"op", "apply", "--op", "hilbert", fn.string(), sp}) == 0);
    CHECK(run(t.path, {"op", "apply", "--op", "k-alpha", "--alpha", "0.5", fn.string(), sp}) == 0);

    // validation errors
    CHECK(run(t.path, {"norm", "eval", "--norm", "morrey", "--p", "0.5", "--lambda", "0.3", fn.string(), sp}) == 1);
    CHECK(run(t.path, {"op", "apply", "--op", "k-alpha", "--alpha", "2", fn.string(), sp}) == 1);
    CHECK(run(t.path, {"op", "apply", "--op", "maximal", (t.path / "missing.fn").string(), sp}) == 1);
    write_function(t.path / "short.fn", {1.0, 2.0});
    CHECK(run(t.path, {"op", "apply", "--op", "maximal", (t.path / "short.fn").string(), sp}) == 1);
    std::ofstream(t.path / "junk.fn") << "{ not json";
    CHECK(run(t.path, {"op", "apply", "--op", "maximal", (t.path / "junk.fn").string(), sp}) == 1);
}

TEST_CASE("certify run writes reports and is reproducible") {
    TempDir t;
    REQUIRE(run(t.path, {"space", "build", "grid4", "--grid", "4"}) == 0);
    const auto sp = (t.path / "grid4.space.json").string();
    const std::vector<std::string> args{"certify", "run", "--theorem", "lemma5.2", "--p", "2", "--lambda", "0.25",
                                        sp, "--family", "ball-indicators"};
    CHECK(run(t.path, args) == 0);
    const auto rep = t.path / "report_lemma5.2.json";
    REQUIRE(fs::exists(rep));
    REQUIRE(fs::exists(t.path / "report_lemma5.2.timing.json"));
    const auto body = slurp(rep);
    const auto j = io::Json::parse(body);
    CHECK(j["theorem"] == "lemma5.2");
    CHECK(j["passed"] == true);
    CHECK(j["params"]["lambda"].get<double>() == 0.25);
    CHECK(run(t.path, args) == 0);
    CHECK(slurp(rep) == body);

    // randomized family with a seed: byte-identical reruns
    const std::vector<std::string> a2{"certify", "run", "--theorem", "thm3.6", sp, "--family", "mixed:12",
                                      "--seed", "5", "--grid", "17"};
    CHECK(run(t.path, a2) == 0);
    const auto b1 = slurp(t.path / "report_thm3.6.json"), c1 = slurp(t.path / "report_thm3.6.eps.csv");
    CHECK(run(t.path, a2) == 0);
    CHECK(slurp(t.path / "report_thm3.6.json") == b1);
    CHECK(slurp(t.path / "report_thm3.6.eps.csv") == c1);
    CHECK(c1.rfind("eps,eta,constant,witness", 0) == 0);

    CHECK(run(t.path, {"report", "index"}) == 0);
    const auto idx = io::read_json(t.path / "index.json");
    CHECK(idx.dump().find("lemma5.2") != std::string::npos);
    CHECK(idx.dump().find("thm3.6") != std::string::npos);
    CHECK(fs::exists(t.path / "summary.csv"));
}

TEST_CASE("certify exit codes") {
    TempDir t;
    REQUIRE(run(t.path, {"space", "build", "grid8", "--grid", "8"}) == 0);
    const auto sp = (t.path / "grid8.space.json").string();
    // missing seed for a randomized family
    CHECK(run(t.path, {"certify", "run", "--theorem", "thm3.6", sp, "--family", "random-step"}) == 1);
    // inadmissible theta2 for thm4.5 (needs theta2 > threshold)
    CHECK(run(t.path, {"certify", "run", "--theorem", "thm4.5", sp, "--theta2", "1.0", "--family", "point-masses"}) == 1);
    CHECK(run(t.path, {"certify", "run", "--theorem", "thm0.0", sp}) == 1);
    CHECK(run(t.path, {"certify", "run", "--theorem", "thm3.6", sp, "--grid", "64"}) == 1);
    // a calibrated constant far too small fails the comparison
    CHECK(run(t.path, {"certify", "run", "--theorem", "prop3.5", sp, "--family", "point-masses", "--c0", "1e-9"}) == 2);
    CHECK(run(t.path, {"certify", "run", "--theorem", "prop3.5", sp, "--family", "point-masses", "--c0", "100"}) == 0);
    CHECK(run(t.path, {"frobnicate"}) == 1);
    CHECK(run(t.path, {"space", "analyze", (t.path / "nope.json").string()}) == 1);
}

TEST_CASE("output directory from the environment") {
    TempDir t;
    const auto env = t.path / "envout";
    ::setenv("GGM_OUT_DIR", env.string().c_str(), 1);
    CHECK(cli::dispatch(std::vector<std::string>{"space", "build", "g", "--grid", "3"}) == 0);
    ::unsetenv("GGM_OUT_DIR");
    CHECK(fs::exists(env / "g.space.json"));
}
