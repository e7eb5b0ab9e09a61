#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "gammalim/experiments.hpp"

using namespace gammalim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("gammalim_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

RunOptions to(const fs::path& dir) {
    RunOptions o;
    o.out_dir = dir;
    o.log = &std::cerr;
    return o;
}

}  // namespace

TEST_CASE("unfold runner on u(x) = x") {
    const auto dir = scratch("unfold");
    const char* cfg = R"({"domain":{"kind":"interval","a":0,"b":1},"nodes":11,"field":{"kind":"linear"}})";
    REQUIRE(run_unfold(cfg, to(dir)) == exit_ok);
    const auto rows = read_csv(dir / "summary.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][0] == "L");
    CHECK(std::abs(std::stod(rows[1][0]) - std::sqrt(2.0)) < 1e-12);
    CHECK(read_csv(dir / "unfolded.csv").size() == 12);
}

TEST_CASE("minimize sweep reproduces the dip") {
    const auto dir = scratch("sweep");
    const char* cfg = R"({"domain":{"kind":"interval","a":-1,"b":1},"eps":[0.1,0.01,0.001],
                          "penalties":[{"a":0,"b":1}],"cells_per_eps":16,"svg":true})";
    REQUIRE(run_minimize_sweep(cfg, to(dir)) == exit_ok);
    const auto rows = read_csv(dir / "sweep.csv");
    REQUIRE(rows.size() == 4);
    CHECK(rows[0][4] == "value_at_a");
    CHECK(std::abs(std::stod(rows[3][4]) - 0.5) < 1e-3);
    CHECK(std::stod(rows[3][5]) == 0.5);
    CHECK(rows[3].back() == "ok");
    CHECK(fs::exists(dir / "field_002.csv"));
    CHECK(fs::exists(dir / "field_002.svg"));

    // Identical config, identical bytes.
    const auto again = scratch("sweep_again");
    REQUIRE(run_minimize_sweep(cfg, to(again)) == exit_ok);
    CHECK(slurp(dir / "sweep.csv") == slurp(again / "sweep.csv"));
    CHECK(slurp(dir / "field_001.csv") == slurp(again / "field_001.csv"));
}

TEST_CASE("minimize sweep without penalty weight") {
    const auto dir = scratch("sweep_zero");
    const char* cfg = R"({"eps":[0.1,0.01],"penalties":[{"a":0,"b":0}],"resolution":0.01,"fields":false})";
    REQUIRE(run_minimize_sweep(cfg, to(dir)) == exit_ok);
    const auto rows = read_csv(dir / "sweep.csv");
    for (std::size_t r = 1; r < rows.size(); ++r) {
        CHECK(std::stod(rows[r][6]) == 0.0);
        CHECK(std::stod(rows[r][7]) == 0.0);
        CHECK(std::stod(rows[r][9]) <= 0.01);
    }
    CHECK_FALSE(fs::exists(dir / "field_000.csv"));
}

TEST_CASE("minimize sweep with a tabulated potential") {
    const auto dir = scratch("sweep_tab");
    std::string v = "[", f = "[";
    for (int k = 0; k <= 60; ++k) {
        const double x = -1.0 + 0.05 * k;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s%.17g", k ? "," : "", x);
        v += buf;
        std::snprintf(buf, sizeof buf, "%s%.17g", k ? "," : "", std::pow(x - 1.0, 4));
        f += buf;
    }
    const std::string cfg = R"({"eps":[0.05],"penalties":[{"a":0,"b":1}],"potential":{"kind":"tabulated","step":1e-4,"v":)" +
                            v + "],\"F\":" + f + "]}}";
    REQUIRE(run_minimize_sweep(cfg, to(dir)) == exit_ok);
    const auto rows = read_csv(dir / "sweep.csv");
    CHECK(std::abs(std::stod(rows[1][5]) - 0.5 * (3.0 - std::sqrt(5.0))) < 1e-3);
}

TEST_CASE("minimize sweep reports solver failure with a diagnostic row") {
    const auto dir = scratch("sweep_fail");
    const char* cfg = R"({"eps":[0.05],"penalties":[{"a":0,"b":1}],
        "potential":{"kind":"tabulated","step":1e-3,"v":[-1,0,1,2,3],"F":[16,1,0,1,16]},
        "solver":{"max_iterations":1,"tolerance":1e-14}})";
    CHECK(run_minimize_sweep(cfg, to(dir)) == exit_numerical_failure);
    const auto rows = read_csv(dir / "sweep.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].back() == "convergence_failure");
}

TEST_CASE("recovery runner on a single torus entry") {
    const auto dir = scratch("recovery");
    const char* cfg = R"({"limit":{"domain":{"kind":"torus"},"exceptional":[{"x":0.3,"lo":0.5,"hi":1}]},
                          "eps":[0.1,0.01,0.001],"mu":0.05})";
    REQUIRE(run_recovery(cfg, to(dir)) == exit_ok);
    const auto rows = read_csv(dir / "recovery.csv");
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].back() == "pass");
    for (std::size_t r = 1; r < rows.size(); ++r) CHECK(rows[r].back() == "pass");
}

TEST_CASE("kwc runner") {
    const auto dir = scratch("kwc");
    const char* cfg = R"({"nodes":401,"eps":0.01,"sigma":1,"lambda":1000,
                          "data":{"kind":"step","at":0,"left":0,"right":1}})";
    REQUIRE(run_kwc(cfg, to(dir)) == exit_ok);
    const auto summary = read_csv(dir / "kwc_summary.csv");
    CHECK(std::abs(std::stod(summary[1].back()) - 0.5) < 5e-2);
    const auto trace = read_csv(dir / "kwc_energy.csv");
    for (std::size_t r = 2; r < trace.size(); ++r) CHECK(std::stod(trace[r][1]) <= std::stod(trace[r - 1][1]) * (1 + 1e-12));
    CHECK(read_csv(dir / "kwc_fields.csv").size() == 402);
}

TEST_CASE("config errors leave no output") {
    const std::vector<std::string> bad = {
        "{not json",
        "[]",
        R"({"eps":[0.01,0.1]})",
        R"({"eps":[]})",
        R"({"eps":[0.1],"penalties":[{"a":5,"b":1}]})",
        R"({"eps":[0.1],"potential":{"kind":"cubic"}})",
        R"({"eps":[0.1],"solver":{"step_rule":"sometimes"}})",
        R"({"eps":[0.1],"resolution":-1})",
    };
    for (const auto& cfg : bad) {
        const auto dir = scratch("bad");
        CHECK(run_minimize_sweep(cfg, to(dir)) == exit_config_error);
        CHECK_FALSE(fs::exists(dir));
    }
    const auto dir = scratch("bad_other");
    CHECK(run_recovery(R"({"limit":{"domain":{"kind":"torus"},"points":[]},"eps":[0.1],"mu":0.05})", to(dir)) ==
          exit_config_error);
    CHECK(run_kwc(R"({"eps":0.01,"lambda":1,"nodes":10,"data":{"kind":"noise"}})", to(dir)) == exit_config_error);
    CHECK(run_unfold(R"({"nodes":1,"field":{"kind":"linear"}})", to(dir)) == exit_config_error);
    CHECK(run_from_file(run_unfold, dir / "missing.json", to(dir)) == exit_config_error);
    CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("resolution override") {
    const auto dir = scratch("resolution");
    RunOptions o = to(dir);
    o.resolution = 0.0;
    CHECK(run_minimize_sweep(R"({"eps":[0.1]})", o) == exit_config_error);
    o.resolution = 0.05;
    CHECK(run_minimize_sweep(R"({"eps":[0.1],"penalties":[{"a":0,"b":1}]})", o) == exit_ok);
}
