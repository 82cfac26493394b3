#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "csf/experiments.hpp"
#include "csf/io.hpp"

using namespace csf;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {
fs::path temp_dir(const std::string& tag) {
  const auto dir = fs::temp_directory_path() / ("csf-test-" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream oss;
  oss << in.rdbuf();
  return oss.str();
}
}  // namespace

TEST_CASE("fmt17 round trips doubles exactly") {
  for (double v : {1.0 / 3.0, 3.141592653589793, -2.2250738585072014e-308, 1e17, 0.1}) {
    CHECK(std::stod(io::fmt17(v)) == v);
  }
}

TEST_CASE("field CSV round trip is exact") {
  const auto dir = temp_dir("field");
  const Grid1D g(-1.0, 1.0, 101);
  const ScalarField f = ScalarField::sampled(g, [](double x) { return std::sin(7.0 * x); });
  io::write_field_csv(f, dir / "f.csv");
  const ScalarField back = io::read_field_csv(dir / "f.csv");
  REQUIRE(back.size() == f.size());
  for (int i = 0; i < f.size(); ++i) CHECK(back.values[i] == f.values[i]);

  const std::string text = slurp(dir / "f.csv");
  CHECK(text.rfind("x,u\n", 0) == 0);
}

TEST_CASE("trajectory index lists times, files and meta") {
  const auto dir = temp_dir("traj");
  Trajectory traj;
  const Grid1D g(0.0, 1.0, 11);
  traj.times = {0.0, 0.5};
  traj.states = {ScalarField::zeros(g), ScalarField::zeros(g)};
  traj.meta.solver = "graphical-theta";
  traj.meta.bc = "zero";
  io::write_trajectory(traj, dir, "run");
  const auto index = nlohmann::json::parse(slurp(dir / "run_index.json"));
  CHECK(index["times"].size() == 2);
  CHECK(index["files"][1] == "run_001.csv");
  CHECK(index["meta"]["solver"] == "graphical-theta");
  CHECK(fs::exists(dir / "run_001.csv"));
}

TEST_CASE("report json carries the schema fields") {
  EstimateReport r = EstimateReport::make("demo", 0.25, 0.1, {0.5, 1.5}, "note");
  const auto j = io::report_to_json(r);
  CHECK(j["name"] == "demo");
  CHECK(j["passed"] == true);
  CHECK(j["margin"] == Approx(0.25));
  CHECK(j["witness"]["x"] == Approx(0.5));
  CHECK(j["witness"]["t"] == Approx(1.5));
  CHECK(j["tolerances"].contains("tol"));
}

TEST_CASE("measure spec json parsing and atom rejection") {
  const auto dir = temp_dir("measure");
  const auto j = nlohmann::json::parse(R"({
    "density": null,
    "singular": [{"kind": "cantor", "depth": 20, "support": [0.0, 1.0], "mass": 1.0, "sign": 1}],
    "atoms": []
  })");
  const auto nu = io::read_measure_spec(j, dir);
  CHECK(nu.singular.size() == 1);
  measures::validate(nu);

  const auto j2 = nlohmann::json::parse(R"({
    "singular": [],
    "atoms": [[0.5, 0.2]]
  })");
  const auto bad = io::read_measure_spec(j2, dir);
  CHECK_THROWS_AS(measures::validate(bad), measures::MeasureValidationError);
}

TEST_CASE("builtin manifest covers every acceptance criterion") {
  const auto& list = experiments::builtins();
  CHECK(list.size() == 13);
  bool has_spike = false, has_parabola = false;
  for (const auto& b : list) {
    has_spike = has_spike || b.name == "delayed-spike-family";
    has_parabola = has_parabola || b.name == "harnack-parabola";
  }
  CHECK(has_spike);
  CHECK(has_parabola);
}

TEST_CASE("config loading: builtins, files and malformed inputs") {
  const auto cfg = experiments::load_config("truncation-level");
  CHECK(cfg["kind"] == "lp");

  CHECK_THROWS_AS(experiments::load_config("/no/such/file.json"),
                  experiments::ConfigError);

  const auto dir = temp_dir("config");
  {
    std::ofstream out(dir / "bad.json");
    out << "{ this is not json";
  }
  CHECK_THROWS_AS(experiments::load_config((dir / "bad.json").string()),
                  experiments::ConfigError);
  {
    std::ofstream out(dir / "nokind.json");
    out << R"({"name": "x"})";
  }
  CHECK_THROWS_AS(experiments::load_config((dir / "nokind.json").string()),
                  experiments::ConfigError);
}

TEST_CASE("experiment outputs are bit-identical across repeated runs") {
  const auto dir1 = temp_dir("repeat1");
  const auto dir2 = temp_dir("repeat2");
  for (const auto* dir : {&dir1, &dir2}) {
    experiments::RunContext ctx;
    ctx.out_dir = *dir;
    auto cfg = experiments::load_config("truncation-level");
    const auto res = experiments::run_experiment(cfg, ctx);
    CHECK(res.passed);
  }
  CHECK(slurp(dir1 / "truncation-level" / "reports.json") ==
        slurp(dir2 / "truncation-level" / "reports.json"));
}

TEST_CASE("validate-exact experiment passes") {
  experiments::RunContext ctx;
  ctx.out_dir = temp_dir("validate");
  nlohmann::json cfg;
  cfg["kind"] = "validate-exact";
  cfg["name"] = "validate-exact";
  const auto res = experiments::run_experiment(cfg, ctx);
  for (const auto& r : res.reports) {
    INFO(r.name << " margin " << r.margin);
    CHECK(r.passed);
  }
  CHECK(res.passed);
}
