#include <doctest.h>

#include "cli_app.hpp"
#include "hbell/state_io.hpp"

#include <json.hpp>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "hbell");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return hbell::cli::run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string tmp(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "hbell_cli_test";
    fs::create_directories(dir);
    return (dir / name).string();
}

nlohmann::json load(const std::string& path) { return nlohmann::json::parse(hbell::read_text(path)); }

std::vector<std::string> csv_lines(const std::string& path) {
    std::istringstream is(hbell::read_text(path));
    std::vector<std::string> lines;
    for (std::string l; std::getline(is, l);) lines.push_back(l);
    return lines;
}

}  // namespace

TEST_CASE("state_tmss_file") {
    const auto out = tmp("tmss.json");
    REQUIRE(run({"state", "--family", "tmss", "--lambda", "0.6", "--out", out}) == 0);
    const auto j = load(out);
    CHECK(j["coefficients"][0].get<double>() == doctest::Approx(0.8));
    CHECK(j["provenance"] == "tmss(0.6)");
    CHECK(fs::exists(out + ".log"));
}

TEST_CASE("state_circle_is_normalized") {
    const auto out = tmp("circle.json");
    REQUIRE(run({"state", "--family", "circle", "--r", "1.12", "--out", out}) == 0);
    CHECK(load(out)["normalized"] == true);
}

TEST_CASE("state_compare_table") {
    const auto out = tmp("compare.csv");
    REQUIRE(run({"state", "--compare", "--out", out}) == 0);
    const auto lines = csv_lines(out);
    CHECK(lines.size() == 14);
    CHECK(lines[0].rfind("n,tmss(0.6),ps_tmss(0.6),circle(1.12),\"pipeline(xi=0.71", 0) == 0);
}

TEST_CASE("usage_errors_exit_nonzero") {
    CHECK(run({"state", "--family", "coherent", "--lambda", "0.5"}) == 2);
    CHECK(run({"state", "--family", "tmss"}) == 2);
    CHECK(run({"frobnicate"}) == 2);
    CHECK(run({}) == 2);
    CHECK(run({"pipeline", "--verify-stage1"}) == 2);
    CHECK(run({"pipeline", "--subtraction", "magic"}) == 2);
    CHECK(run({"scan", "--family", "circle", "--param", "lambda", "--from", "0", "--to", "1"}) == 2);
    CHECK(run({"bell", "--state", "x.json", "--format", "xml"}) == 2);
    CHECK(run({"optimize", "--n", "20"}) == 2);
}

TEST_CASE("computational_errors_exit_one") {
    CHECK(run({"bell", "--state", tmp("does_not_exist.json")}) == 1);
    CHECK(run({"state", "--family", "tmss", "--lambda", "1.5"}) == 1);
}

TEST_CASE("pipeline_report_bell_block") {
    const auto out = tmp("pipeline.json");
    REQUIRE(run({"pipeline", "--xi", "0.7071", "--iters", "3", "--out", out}) == 0);
    const auto j = load(out);
    CHECK(j["bell"]["B"].get<double>() == doctest::Approx(2.071).epsilon(0.005));
    CHECK(j["stages"].size() == 5);
    CHECK(j["stage1"].is_null());
    CHECK(hbell::read_state_file(out).state.normalized());
}

TEST_CASE("pipeline_without_iterations_reports_zero") {
    const auto out = tmp("pipeline0.json");
    REQUIRE(run({"pipeline", "--xi", "0.7071", "--iters", "0", "--out", out}) == 0);
    CHECK(load(out)["bell"]["B"].get<double>() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("pipeline_stage1_verification") {
    const auto out = tmp("pipeline_s1.json");
    REQUIRE(run({"pipeline", "--xi", "0.7071", "--iters", "3", "--lambda", "0.01", "--verify-stage1", "--out", out}) == 0);
    CHECK(load(out)["stage1"]["trace_distance"].get<double>() < 1e-3);
}

TEST_CASE("bell_on_vacuum_and_pipeline_files") {
    const auto vac = tmp("vac.json");
    hbell::write_state_file(vac, hbell::CoefficientVector::vacuum(3), "vacuum");
    const auto out = tmp("bell_vac.json");
    REQUIRE(run({"bell", "--state", vac, "--out", out}) == 0);
    auto j = load(out);
    CHECK(j["B"].get<double>() == doctest::Approx(0.0));
    CHECK(j["S"].get<double>() == doctest::Approx(0.5));

    const auto pipe = tmp("pipe_state.json");
    REQUIRE(run({"pipeline", "--out", pipe}) == 0);
    const auto out2 = tmp("bell_pipe.csv");
    REQUIRE(run({"bell", "--state", pipe, "--chi", "0.785398163", "--format", "csv", "--out", out2}) == 0);
    const auto lines = csv_lines(out2);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].rfind("chi,p_pp_chi,p_pp_3chi,E_chi,E_3chi,B,S,cutoff,provenance", 0) == 0);
}

TEST_CASE("scan_circle_radius") {
    const auto out = tmp("scan.csv");
    REQUIRE(run({"scan", "--family", "circle", "--param", "r", "--from", "0.5", "--to", "2", "--steps", "61",
                 "--metric", "chsh", "--format", "csv", "--out", out}) == 0);
    const auto lines = csv_lines(out);
    REQUIRE(lines.size() == 62);
    CHECK(lines[0] == "r,B,S,value");
    double best = -1, arg = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const double r = std::stod(lines[i]);
        const double b = std::stod(lines[i].substr(lines[i].find(',') + 1));
        if (b > best) best = b, arg = r;
    }
    CHECK(std::abs(arg - 1.12) <= 0.05);
}

TEST_CASE("scan_iterations") {
    const auto out = tmp("scan_iters.csv");
    REQUIRE(run({"scan", "--family", "pipeline", "--param", "iters", "--from", "0", "--to", "6", "--format", "csv",
                 "--out", out}) == 0);
    CHECK(csv_lines(out).size() == 8);
}

TEST_CASE("sample_summary_within_three_sigma") {
    const auto pipe = tmp("pipe_for_sample.json");
    REQUIRE(run({"pipeline", "--out", pipe}) == 0);
    const auto out = tmp("sample.json");
    REQUIRE(run({"sample", "--state", pipe, "--chi", "0.785398", "--n", "200000", "--seed", "42", "--out", out}) == 0);
    const auto j = load(out);
    CHECK(std::abs(j["z"].get<double>()) < 3.0);
    CHECK(j["generator"] == "splitmix64");
}

TEST_CASE("outputs_are_byte_identical_across_runs") {
    const auto pipe = tmp("pipe_repro.json");
    REQUIRE(run({"pipeline", "--out", pipe}) == 0);
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"sample", "--state", pipe, "--n", "20000", "--seed", "7"},
             {"optimize", "--n", "6", "--starts", "4"},
             {"pipeline", "--format", "csv"},
             {"scan", "--family", "tmss", "--param", "chi", "--from", "0", "--to", "1.5", "--steps", "5"}}) {
        const auto a = tmp("repro_a"), b = tmp("repro_b");
        auto x = args, y = args;
        x.insert(x.end(), {"--out", a});
        y.insert(y.end(), {"--out", b});
        REQUIRE(run(x) == 0);
        REQUIRE(run(y) == 0);
        CHECK(hbell::read_text(a) == hbell::read_text(b));
    }
}

TEST_CASE("optimize_outputs") {
    const auto out = tmp("opt.json");
    REQUIRE(run({"optimize", "--objective", "chsh", "--n", "10", "--out", out}) == 0);
    const auto j = load(out);
    CHECK(j["B"].get<double>() >= 2.07);
    CHECK(j["provenance"].get<std::string>().rfind("optimized(CHSH, N=10, chi=0.78539816", 0) == 0);

    const auto sweep = tmp("sweep.csv");
    REQUIRE(run({"optimize", "--sweep-n", "2:5", "--starts", "4", "--format", "csv", "--out", sweep}) == 0);
    CHECK(csv_lines(sweep).size() == 5);
}
