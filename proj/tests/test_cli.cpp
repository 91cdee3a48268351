#include "mnls/io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

// End-to-end tests of the command-line binary. The harness communicates the
// binary location through the MNLS_BIN environment variable.

namespace {

using nlohmann::json;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string binary() {
    const char* bin = std::getenv("MNLS_BIN");
    REQUIRE(bin != nullptr);
    return bin;
}

RunResult run(const std::string& args) {
    const std::string cmd = binary() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) res.out.append(buf, n);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("mnls_cli_test_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

json load_json(const std::string& path) {
    std::ifstream is(path);
    REQUIRE(is.good());
    json j;
    is >> j;
    return j;
}

std::string first_line(const std::string& path) {
    std::ifstream is(path);
    std::string line;
    std::getline(is, line);
    return line;
}

} // namespace

TEST_CASE("version and usage behaviour") {
    CHECK(run("--version").exit_code == 0);
    CHECK(run("").exit_code == 1);               // a subcommand is required
    CHECK(run("frobnicate").exit_code == 1);     // unknown subcommand
    CHECK(run("solve --p 4 --no-such-flag").exit_code == 1);
}

TEST_CASE("radial subcommand writes a profile and a summary") {
    TempDir tmp;
    const std::string csv = tmp.file("prof.csv");
    const std::string rep = tmp.file("prof.json");
    const RunResult r =
        run("radial --dim 2 --p 4 --out " + csv + " --report " + rep);
    CHECK(r.exit_code == 0);

    const json summary = load_json(rep);
    CHECK(summary.at("dim") == 2);
    CHECK(summary.at("mass").get<double>() == doctest::Approx(11.7008965).epsilon(1e-6));
    CHECK(summary.at("energy").get<double>() == doctest::Approx(5.8504483).epsilon(1e-6));
    CHECK(summary.contains("version"));
    CHECK(summary.at("config").at("command") == "radial");

    CHECK(first_line(csv).substr(0, 7) == "# mnls ");

    // Usage failures: p at the L2-critical floor is refused.
    CHECK(run("radial --dim 2 --p 2.0").exit_code == 1);
}

TEST_CASE("solve writes a dump and a deterministic report") {
    TempDir tmp;
    const std::string fld = tmp.file("gs.fld");
    const std::string rep1 = tmp.file("r1.json");
    const std::string rep2 = tmp.file("r2.json");
    const std::string base = "solve --dim 2 --p 4 --b 0.1 --box 11 --n 89 --tol 1e-8 ";

    CHECK(run(base + "--out " + fld + " --report " + rep1).exit_code == 0);
    CHECK(run(base + "--out " + tmp.file("gs2.fld") + " --report " + rep2).exit_code == 0);

    json a = load_json(rep1);
    json b = load_json(rep2);
    CHECK(a.at("energy").get<double>() > 0.0);
    CHECK(a.at("residual").get<double>() <= 1e-8);
    CHECK(a.at("config").at("n") == 89);

    // Identical configuration -> identical report, timing aside.
    a.erase("seconds");
    b.erase("seconds");
    a.at("config").erase("out");
    b.at("config").erase("out");
    CHECK(a == b);

    // The dump is a valid MNLS field readable by the library.
    const mnls::FieldDump dump = mnls::read_field(fld);
    CHECK(dump.p == 4.0);
    CHECK(dump.field.grid.points[0] == 89);
    CHECK(dump.magnetic.entry(0, 1) == 0.1);

    // Restarting from the dump converges immediately.
    const RunResult restart = run("solve --dim 2 --p 4 --b 0.1 --box 11 --n 89 --init file "
                                  "--init-file " + fld + " --report " + tmp.file("r3.json"));
    CHECK(restart.exit_code == 0);
    CHECK(load_json(tmp.file("r3.json")).at("iterations").get<int>() <= 3);
}

TEST_CASE("exit codes distinguish usage, numerical, and I/O failures") {
    TempDir tmp;
    // p = 2.0 is a usage error.
    CHECK(run("solve --dim 2 --p 2.0 --box 8 --n 65").exit_code == 1);
    // Even n is a usage error.
    CHECK(run("solve --dim 2 --p 4 --box 8 --n 64").exit_code == 1);
    // Iteration cap too small: numerical failure.
    CHECK(run("solve --dim 2 --p 4 --b 0.1 --box 8 --n 65 --init gaussian --max-iters 2")
              .exit_code == 2);
    // Missing init file: I/O failure.
    CHECK(run("solve --dim 2 --p 4 --box 8 --n 65 --init file --init-file " +
              tmp.file("nope.fld")).exit_code == 3);
    // Unwritable output directory: I/O failure.
    CHECK(run("solve --dim 2 --p 4 --box 11 --n 89 --out /nonexistent-dir/x.fld").exit_code == 3);
}

TEST_CASE("config file supplies defaults and flags take precedence") {
    TempDir tmp;
    const std::string cfg = tmp.file("cfg.json");
    {
        std::ofstream os(cfg);
        os << R"({"dim": 2, "p": 4.0, "b": 0.15, "box": 11.0, "n": 89})";
    }
    const std::string rep = tmp.file("rep.json");
    // --b on the command line overrides the config file's 0.15.
    const RunResult r = run("solve --config " + cfg + " --b 0.05 --report " + rep);
    CHECK(r.exit_code == 0);
    const json summary = load_json(rep);
    CHECK(summary.at("b").get<double>() == 0.05);
    CHECK(summary.at("config").at("n") == 89);
    CHECK(summary.at("config").at("p") == 4.0);

    // Malformed config file is a usage error.
    const std::string bad = tmp.file("bad.json");
    {
        std::ofstream os(bad);
        os << "{not json";
    }
    CHECK(run("solve --config " + bad + " --p 4").exit_code == 1);
}

TEST_CASE("sweep writes the energy-curve CSV") {
    TempDir tmp;
    const std::string csv = tmp.file("sweep.csv");
    const std::string rep = tmp.file("sweep.json");
    const RunResult r = run("sweep --dim 2 --p 4 --box 11 --n 89 --b 0,0.05,0.1,0.15,0.2 "
                            "--workers 2 --out " + csv + " --report " + rep);
    CHECK(r.exit_code == 0);

    std::ifstream is(csv);
    std::string line;
    std::getline(is, line);
    CHECK(line.substr(0, 7) == "# mnls ");
    std::getline(is, line);
    CHECK(line == "b,energy,moment,c2_fit,convexity_margin");
    int rows = 0;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 5);

    const json summary = load_json(rep);
    CHECK(summary.at("rows").size() == 5);
    CHECK(summary.at("c2_fit").get<double>() > 0.0);
}

TEST_CASE("spectrum writes one row per eigenvalue") {
    TempDir tmp;
    const std::string csv = tmp.file("spec.csv");
    const RunResult r = run("spectrum --dim 2 --p 4 --box 11 --n 89 --b 0.1 --k 4 "
                            "--eig-tol 1e-6 --out " + csv);
    CHECK(r.exit_code == 0);

    std::ifstream is(csv);
    std::string line;
    std::getline(is, line); // comment
    std::getline(is, line);
    CHECK(line == "b,k,lambda_k,residual_k");
    int rows = 0;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 4);
}

TEST_CASE("decay fits the tail of a solved groundstate") {
    TempDir tmp;
    const std::string csv = tmp.file("decay.csv");
    const std::string rep = tmp.file("decay.json");
    const RunResult r = run("decay --dim 2 --p 4 --b 0.2 --box 11 --n 89 --rlo 4 --rhi 6 "
                            "--out " + csv + " --report " + rep);
    CHECK(r.exit_code == 0);

    const json summary = load_json(rep);
    CHECK(summary.at("law") == "2d-exact");
    CHECK(summary.contains("log_c"));
    CHECK(summary.at("residual").get<double>() < 1.0);

    std::ifstream is(csv);
    std::string line;
    std::getline(is, line);
    std::getline(is, line);
    CHECK(line == "r,mean_abs,g");
}
