#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"

#include "spindirac/config.hpp"
#include "spindirac/dirac.hpp"
#include "spindirac/field_io.hpp"
#include "spindirac/report.hpp"

using namespace spindirac;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::path(SPINDIRAC_TMP) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config_text(in, "test.ini");
}

std::string field_of(auto&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("key-value config parses every section") {
  const RunConfig c = parse(
      "[lattice]\ngamma1 = 1 0\ngamma2 = 0.2 0.6\n[spin]\neps1 = -1\neps2 = 1\n[grid]\nn = 24\n"
      "[solver]\nschedule = 2, 3, 4\ntol_solve = 1e-9\n[variational]\nq_values = 1.5 2\n"
      "[output]\ndir = results\ncopies = 3x2\n[run]\nseed = 42\n");
  CHECK(c.gamma2.x == 0.2);
  CHECK(c.eps1 == -1);
  CHECK(c.n == 24);
  CHECK(c.schedule == std::vector<double>{2.0, 3.0, 4.0});
  CHECK(*c.tol_solve == 1e-9);
  CHECK(c.q_values.size() == 2);
  CHECK(c.out_dir == "results");
  CHECK(c.copies1 == 3);
  CHECK(c.copies2 == 2);
  CHECK(c.seed == 42);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("validation errors name the field") {
  CHECK(field_of([] { parse("[grid]\nn = 31\n").validate(); }) == "grid.n");
  CHECK(field_of([] { parse("[grid]\nn = 1024\n").validate(); }) == "grid.n");
  CHECK(field_of([] { parse("[spin]\neps1 = 0\n").validate(); }) == "spin.eps1");
  CHECK(field_of([] { parse("[solver]\ntol_norm = 0\n").validate(); }) == "solver.tol_norm");
  CHECK(field_of([] { parse("[solver]\nschedule = 2 3\n").validate(); }) == "schedule");
  CHECK(field_of([] { parse("[lattice]\ngamma1 = 1 1\ngamma2 = 2 2\n").validate(); }) == "lattice");
  CHECK(field_of([] { parse("[grid]\nsize = 8\n"); }) == "grid.size");
  CHECK(field_of([] { parse("[grid]\nn = eight\n"); }) == "grid.n");
  CHECK(field_of([] { parse("[variational]\nq_values = 1.2\n").validate(); }) == "variational.q_values");
}

TEST_CASE("syntax errors report the line") {
  try {
    parse("[grid]\nn = 8\nthis line is broken\n");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("test.ini:3") != std::string::npos);
  }
}

TEST_CASE("JSON config is equivalent to key-value config") {
  const RunConfig a = parse("[lattice]\ngamma2 = 0 2\n[spin]\neps1 = 1\neps2 = -1\n[grid]\nn = 16\n");
  const RunConfig b = parse_config_json(Json::parse(
      R"({"lattice": {"gamma2": [0, 2]}, "spin": {"eps1": 1, "eps2": -1}, "grid": {"n": 16}})"));
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK_THROWS_AS(parse_config_json(Json::parse(R"({"grid": {"bogus": 1}})")), ValidationError);
}

TEST_CASE("copies parsing") {
  CHECK(parse_copies("3x1") == std::pair{3, 1});
  CHECK(parse_copies("2X4") == std::pair{2, 4});
  CHECK_THROWS_AS(parse_copies("3"), ValidationError);
  CHECK_THROWS_AS(parse_copies("0x1"), ValidationError);
}

TEST_CASE("solution files round-trip exactly") {
  const auto dir = scratch("roundtrip");
  const Lattice lat = make_lattice({1.0, 0.1}, {0.3, 0.7});
  std::mt19937_64 rng(4);
  const SpinorField phi = random_band_limited(lat, SpinStructure(-1, 1), 8, 3, rng);
  const Solution sol{phi, 1.234567890123, 3.5, 1e-11, 1.0, 0.0};
  save_solution(sol, dir / "s.json", {{2.0, 1.0, 2.0, 1e-12, 3}});
  const Solution back = load_solution(dir / "s.json");
  CHECK(back.lambda == sol.lambda);
  CHECK(back.p == sol.p);
  CHECK(back.phi.lattice() == lat);
  CHECK(back.phi.spin() == SpinStructure(-1, 1));
  for (std::size_t i = 0; i < phi.size(); ++i) {
    CHECK(back.phi.plus()[i] == phi.plus()[i]);
    CHECK(back.phi.minus()[i] == phi.minus()[i]);
  }
  std::ofstream(dir / "bad.json") << R"({"kind": "solution", "schema_version": 1, "n_grid": 8})";
  CHECK_THROWS_AS(load_solution(dir / "bad.json"), ValidationError);
  CHECK_THROWS_AS(load_solution(dir / "absent.json"), Error);
}

TEST_CASE("threshold verdicts") {
  const double t = 2.0 * std::sqrt(std::numbers::pi);
  CHECK(threshold_verdict(t - 1e-9) == kVerdictBelow);
  CHECK(threshold_verdict(t + 1e-9) == kVerdictFails);
  CHECK(threshold_verdict(t) == kVerdictFails);
  const Json j = threshold_entry(std::numbers::pi);
  CHECK(j["below"].get<bool>());
  CHECK(j["sphere_value"].get<double>() == sphere_lambda_min(2));
}

TEST_CASE("spectrum report") {
  RunConfig cfg;
  cfg.n = 12;
  const Json r = cmd_spectrum(cfg);
  CHECK(r["schema_version"] == kSchemaVersion);
  CHECK(r["spectrum"]["lambda1_sqrt_area"].get<double>() == doctest::Approx(std::numbers::pi));
  CHECK(r["spectrum"]["kernel_dimension"] == 0);
  CHECK(report_passes(r));
  CHECK(r.dump() == cmd_spectrum(cfg).dump());

  cfg.eps2 = 1;
  const Json t = cmd_spectrum(cfg);
  CHECK(t["spectrum"]["kernel_dimension"] == 2);
}

TEST_CASE("solve, resume and surface reports") {
  const auto dir = scratch("solve");
  RunConfig cfg;
  cfg.n = 16;
  cfg.out_dir = (dir / "a").string();
  const Json r = cmd_solve(cfg);
  CHECK(r["solution"]["lambda"].get<double>() == doctest::Approx(std::numbers::pi).epsilon(1e-10));
  CHECK(r["threshold"]["verdict"] == kVerdictBelow);
  CHECK(r["conformal_factor"]["values"].size() == 256);
  CHECK(report_passes(r));
  const auto sol_path = dir / "a" / "solution.json";
  CHECK(std::filesystem::exists(sol_path));

  RunConfig resumed = cfg;
  resumed.out_dir = (dir / "b").string();
  const Json r2 = cmd_solve(resumed, sol_path);
  CHECK(std::abs(r2["solution"]["lambda"].get<double>() - r["solution"]["lambda"].get<double>()) < 1e-12);

  RunConfig surf = cfg;
  surf.out_dir = (dir / "c").string();
  const Json v = cmd_surface(surf, sol_path, true);
  CHECK_FALSE(std::filesystem::exists(dir / "c"));
  CHECK(report_passes(v));
  const Json s = cmd_surface(surf, sol_path, false);
  CHECK(std::filesystem::exists(dir / "c" / "surface.obj"));
  const Json side = read_json(dir / "c" / "surface.json");
  for (const char* key : {"periods", "H", "lambda", "diagnostics", "branch_points"}) CHECK(side.contains(key));
  CHECK(side["diagnostics"].contains("conformality"));
  CHECK(side["diagnostics"].contains("closedness"));
  CHECK(side["diagnostics"].contains("cmc_median_err"));

  Solution zero = load_solution(sol_path);
  zero.phi *= cplx(0.0, 0.0);
  save_solution(zero, dir / "zero.json");
  CHECK_THROWS_AS(cmd_surface(surf, dir / "zero.json", true), DegenerateInputError);
}

TEST_CASE("threshold fails on the thin rectangle") {
  const auto dir = scratch("thin");
  RunConfig cfg;
  cfg.gamma2 = {0.0, 0.6};
  cfg.n = 16;
  cfg.out_dir = dir.string();
  const Json r = cmd_solve(cfg);
  CHECK(r["solution"]["lambda"].get<double>() == doctest::Approx(std::numbers::pi / std::sqrt(0.6)).epsilon(1e-10));
  CHECK(r["threshold"]["verdict"] == kVerdictFails);
}
