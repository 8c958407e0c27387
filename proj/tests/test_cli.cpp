#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "nlwave/cli.hpp"
#include "test_helpers.hpp"

using namespace nlwave;
using nlwave::cli::run_cli;
namespace fs = std::filesystem;

namespace {

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  nlohmann::json j;
  in >> j;
  return j;
}

std::string preset_config(const std::string& dir, double T_scale = 0.0) {
  nlohmann::json cfg = {{"preset", "single-odd"}, {"K", 8}, {"nt", 129}, {"nx", 257}};
  if (T_scale > 0.0) cfg["T"] = make_preset("single-odd", 257, 129).T * T_scale;
  const std::string path = dir + "/config.json";
  testing::write_file(path, cfg.dump(2));
  return path;
}

}  // namespace

TEST_CASE("config validation") {
  const std::string dir = testing::temp_dir("cfg");
  SUBCASE("functions and preset are mutually exclusive") {
    testing::write_file(dir + "/bad.json",
                        R"({"preset":"single-odd","functions":{"f":"0"}})");
    CHECK(run_cli({"check", "--config", dir + "/bad.json", "--out", dir}) == 4);
  }
  SUBCASE("neither given") {
    testing::write_file(dir + "/bad2.json", R"({"beta": 3.0})");
    CHECK(run_cli({"check", "--config", dir + "/bad2.json", "--out", dir}) == 4);
  }
  SUBCASE("unknown keys are rejected") {
    testing::write_file(dir + "/bad3.json", R"({"preset":"single-odd","bogus":1})");
    CHECK(run_cli({"check", "--config", dir + "/bad3.json", "--out", dir}) == 4);
  }
  SUBCASE("malformed JSON") {
    testing::write_file(dir + "/bad4.json", "{");
    CHECK(run_cli({"check", "--config", dir + "/bad4.json", "--out", dir}) == 4);
  }
  SUBCASE("degenerate beta") {
    testing::write_file(
        dir + "/beta.json",
        R"({"beta":1.0,"T":0.5,"functions":{"f":"0","phi":"0","psi":"0","h":"1"}})");
    CHECK(run_cli({"check", "--config", dir + "/beta.json", "--out", dir}) == 4);
  }
  SUBCASE("missing config file") {
    CHECK(run_cli({"check", "--config", dir + "/nope.json", "--out", dir}) == 4);
  }
  SUBCASE("bad expression is rejected with position info") {
    testing::write_file(
        dir + "/expr.json",
        R"({"beta":3.0,"T":0.5,"functions":{"f":"2**x","phi":"0","psi":"0","h":"1"}})");
    CHECK(run_cli({"check", "--config", dir + "/expr.json", "--out", dir}) == 4);
  }
  SUBCASE("unknown CLI flag") {
    CHECK(run_cli({"check", "--bogus"}) == 4);
  }
}

TEST_CASE("check exit codes follow the contraction inequality") {
  const std::string dir = testing::temp_dir("check");
  SUBCASE("preset at its own horizon passes") {
    CHECK(run_cli({"check", "--config", preset_config(dir), "--out", dir}) == 0);
    auto rep = load_json(dir + "/check_report.json");
    CHECK(rep["compliance"]["all_pass"].get<bool>());
    CHECK(rep["constants"]["contraction_holds"].get<bool>());
    CHECK(rep["constants"]["contraction_lhs"].get<double>() < 1.0);
  }
  SUBCASE("doubling the horizon breaks the inequality") {
    CHECK(run_cli({"check", "--config", preset_config(dir, 2.0), "--out", dir}) == 2);
    auto rep = load_json(dir + "/check_report.json");
    CHECK(rep["constants"]["contraction_lhs"].get<double>() >= 1.0);
  }
  SUBCASE("bisection reports the largest feasible horizon") {
    CHECK(run_cli({"check", "--config", preset_config(dir), "--max-T", "--out", dir}) == 0);
    auto rep = load_json(dir + "/check_report.json");
    const double t_max = rep["max_T"].get<double>();
    const double preset_T = make_preset("single-odd", 257, 129).T;
    CHECK(t_max > 0.0);
    CHECK(std::fabs(t_max - preset_T) <= 0.1 * preset_T);
  }
}

TEST_CASE("solve-inverse round trip") {
  const std::string dir = testing::temp_dir("solve");
  const std::string cfg = preset_config(dir);
  CHECK(run_cli({"solve-inverse", "--config", cfg, "--out", dir + "/run"}) == 0);
  auto rep = load_json(dir + "/run/run_report.json");
  CHECK(rep["converged"].get<bool>());
  CHECK(rep["error_vs_truth"]["a_sup"].get<double>() <= 5e-3);
  CHECK(rep["residuals"]["overdet"].get<double>() <= 1e-4);

  SUBCASE("outputs are byte-identical across runs") {
    CHECK(run_cli({"solve-inverse", "--config", cfg, "--out", dir + "/again"}) == 0);
    CHECK(testing::read_file(dir + "/run/a.csv") == testing::read_file(dir + "/again/a.csv"));
    CHECK(testing::read_file(dir + "/run/field.csv") ==
          testing::read_file(dir + "/again/field.csv"));
  }
  SUBCASE("csv headers carry the documented columns") {
    const std::string a_csv = testing::read_file(dir + "/run/a.csv");
    CHECK(a_csv.rfind("t,a,a_true,abs_err\n", 0) == 0);
    const std::string field_csv = testing::read_file(dir + "/run/field.csv");
    CHECK(field_csv.rfind("x,t,u\n", 0) == 0);
  }
}

TEST_CASE("iteration cap maps to the non-convergence exit") {
  const std::string dir = testing::temp_dir("cap");
  // moderate horizon override: several Picard sweeps are genuinely needed
  testing::write_file(dir + "/cfg.json",
                      R"({"preset":"single-odd","T":0.4,"K":8,"nt":129,"nx":257})");
  CHECK(run_cli({"solve-inverse", "--config", dir + "/cfg.json", "--out", dir, "--max-iter",
                 "1"}) == 3);
  auto rep = load_json(dir + "/run_report.json");
  CHECK(!rep["converged"].get<bool>());
}

TEST_CASE("condition gate and --force") {
  const std::string dir = testing::temp_dir("force");
  // phi = x is not mean-zero (and incompatible with h), so the gate trips
  testing::write_file(dir + "/bad.json", R"({
    "beta": 0.0, "T": 0.1, "K": 4, "nt": 65, "nx": 129,
    "functions": {"f": "0", "phi": "x", "psi": "0", "h": "0.5"}
  })");
  CHECK(run_cli({"solve-inverse", "--config", dir + "/bad.json", "--out", dir + "/gated"}) == 2);
  CHECK(!fs::exists(dir + "/gated/a.csv"));

  CHECK(run_cli({"solve-inverse", "--config", dir + "/bad.json", "--out", dir + "/forced",
                 "--force"}) == 0);
  auto rep = load_json(dir + "/forced/run_report.json");
  bool warned = false;
  for (const auto& w : rep["warnings"]) {
    if (w.get<std::string>().find("force") != std::string::npos) warned = true;
  }
  CHECK(warned);
  // the mean-zero violation shows up as an inflated integral residual
  CHECK(rep["residuals"]["integral"].get<double>() > 1e-3);
}

TEST_CASE("forward solve writes the field") {
  const std::string dir = testing::temp_dir("fwd");
  testing::write_file(dir + "/fwd.json", R"json({
    "beta": 3.0, "T": 0.5, "K": 2, "nt": 257, "nx": 129,
    "functions": {"f": "0", "phi": "sin(2*pi*x)", "psi": "0", "a": "0"}
  })json");
  CHECK(run_cli({"solve-forward", "--config", dir + "/fwd.json", "--out", dir}) == 0);
  const std::string field = testing::read_file(dir + "/field.csv");
  CHECK(field.rfind("x,t,u\n", 0) == 0);
  // spot value: u(0.25, 0) = sin(pi/2) = 1
  const auto row = field.find("\n0.25,0,");
  REQUIRE(row != std::string::npos);
  const double u_spot = std::stod(field.substr(row + 8));
  CHECK(u_spot == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("manufacture then audit its own output") {
  const std::string dir = testing::temp_dir("man");
  CHECK(run_cli({"manufacture", "--preset", "single-odd", "--out", dir, "--K", "8", "--nt",
                 "129", "--nx", "257"}) == 0);
  CHECK(fs::exists(dir + "/problem.json"));
  CHECK(fs::exists(dir + "/truth_a.csv"));
  CHECK(fs::exists(dir + "/truth_field.csv"));
  CHECK(run_cli({"check", "--config", dir + "/problem.json", "--out", dir}) == 0);
}

TEST_CASE("residual audit of a produced solution") {
  const std::string dir = testing::temp_dir("resid");
  testing::write_file(dir + "/cfg.json", R"({
    "preset": "single-odd", "T": 0.4, "K": 8, "nt": 513, "nx": 257
  })");
  REQUIRE(run_cli({"solve-inverse", "--config", dir + "/cfg.json", "--out", dir}) == 0);
  CHECK(run_cli({"residual", "--config", dir + "/cfg.json", "--field", dir + "/field.csv",
                 "--a", dir + "/a.csv", "--out", dir}) == 0);
  auto rep = load_json(dir + "/residual_report.json");
  CHECK(rep["overdet"].get<double>() <= 1e-4);
  CHECK(rep["integral"].get<double>() <= 1e-4);
  CHECK(rep["pde"].get<double>() <= 1e-4);
}

TEST_CASE("sampled data files") {
  const std::string dir = testing::temp_dir("samples");
  // psi supplied as a CSV sample table, everything else symbolic
  std::string csv = "x,value\n";
  for (int i = 0; i <= 256; ++i) {
    const double x = i / 256.0;
    csv += cli::format_double(x) + "," + cli::format_double(0.0) + "\n";
  }
  testing::write_file(dir + "/psi.csv", csv);
  testing::write_file(dir + "/cfg.json", R"json({
    "beta": 3.0, "T": 0.5, "K": 2, "nt": 257, "nx": 129,
    "functions": {"f": "0", "phi": "sin(2*pi*x)", "psi": "@psi.csv", "a": "0"}
  })json");
  CHECK(run_cli({"solve-forward", "--config", dir + "/cfg.json", "--out", dir}) == 0);
}

TEST_CASE("verbatim coupling mode is selectable") {
  const std::string dir = testing::temp_dir("printedmode");
  testing::write_file(dir + "/cfg.json",
                      R"({"preset":"single-odd","T":0.4,"K":4,"nt":129,"nx":257})");
  CHECK(run_cli({"solve-inverse", "--config", dir + "/cfg.json", "--out", dir + "/a",
                 "--mode", "as-printed"}) == 0);
  CHECK(run_cli({"solve-inverse", "--config", dir + "/cfg.json", "--out", dir + "/b",
                 "--mode", "ode-consistent"}) == 0);
  // the coefficient series only reads the odd modes, so the recovered a(t)
  // agrees up to stopping-point roundoff; the even field components differ
  std::istringstream a_rows(testing::read_file(dir + "/a/a.csv"));
  std::istringstream b_rows(testing::read_file(dir + "/b/a.csv"));
  std::string ra, rb;
  std::getline(a_rows, ra);
  std::getline(b_rows, rb);
  while (std::getline(a_rows, ra) && std::getline(b_rows, rb)) {
    const double va = std::stod(ra.substr(ra.find(',') + 1));
    const double vb = std::stod(rb.substr(rb.find(',') + 1));
    CHECK(std::fabs(va - vb) <= 1e-9);
  }
  CHECK(testing::read_file(dir + "/a/field.csv") != testing::read_file(dir + "/b/field.csv"));
  CHECK(run_cli({"solve-inverse", "--config", dir + "/cfg.json", "--out", dir + "/c",
                 "--mode", "bogus"}) == 4);
}

TEST_CASE("threads flag preserves outputs") {
  const std::string dir = testing::temp_dir("threads");
  testing::write_file(dir + "/cfg.json",
                      R"({"preset":"single-odd","T":0.4,"K":4,"nt":129,"nx":257})");
  CHECK(run_cli({"solve-inverse", "--config", dir + "/cfg.json", "--out", dir + "/one"}) == 0);
  CHECK(run_cli({"solve-inverse", "--config", dir + "/cfg.json", "--out", dir + "/four",
                 "--threads", "4"}) == 0);
  CHECK(testing::read_file(dir + "/one/field.csv") ==
        testing::read_file(dir + "/four/field.csv"));
}
