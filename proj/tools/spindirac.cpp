// Command-line front end: spectrum, mu-curve, solve, surface, check.
//
// Exit codes: 0 success, 2 invalid input, 3 solver or I/O failure, 4 failed
// check.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "spindirac/report.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;
constexpr int kExitCheck = 4;

struct Flags {
  std::string config;
  std::string out;
  std::optional<unsigned long long> seed;
  std::optional<int> grid;
  std::string copies;
  std::string solution;
  bool verify_only = false;
};

spindirac::RunConfig resolve(const Flags& f) {
  spindirac::RunConfig cfg = f.config.empty() ? spindirac::RunConfig{} : spindirac::load_config(f.config);
  if (!f.out.empty()) cfg.out_dir = f.out;
  if (f.seed) cfg.seed = *f.seed;
  if (f.grid) {
    cfg.n = *f.grid;
    cfg.mu_grid = *f.grid;
  }
  if (!f.copies.empty()) std::tie(cfg.copies1, cfg.copies2) = spindirac::parse_copies(f.copies);
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "Configuration file (key-value or .json)");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_option("--grid", f.grid, "Grid size N (even, 4..512)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirac spectra, conformal spinor problems and CMC tori on flat 2-tori"};
  app.require_subcommand(1);
  Flags f;

  auto* spectrum = app.add_subcommand("spectrum", "Closed-form and numeric Dirac spectrum");
  auto* mu = app.add_subcommand("mu-curve", "Sweep mu_q over the configured exponents");
  auto* solve = app.add_subcommand("solve", "Continuation to the critical exponent p = 4");
  auto* surface = app.add_subcommand("surface", "Weierstrass immersion of a saved solution");
  auto* check = app.add_subcommand("check", "Verify a saved solution or the configured spectrum");
  for (auto* cmd : {spectrum, mu, solve, surface, check}) add_common(cmd, f);
  solve->add_option("--resume", f.solution, "Start from a saved solution file");
  surface->add_option("--solution", f.solution, "Solution file")->required();
  surface->add_option("--copies", f.copies, "Tiling K1xK2");
  surface->add_flag("--verify-only", f.verify_only, "Report only, write no mesh");
  check->add_option("--solution", f.solution, "Solution file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    const spindirac::RunConfig cfg = resolve(f);
    std::optional<std::filesystem::path> sol_path;
    if (!f.solution.empty()) sol_path = f.solution;

    spindirac::Json report;
    std::string name;
    if (spectrum->parsed()) {
      report = spindirac::cmd_spectrum(cfg);
      name = "report_spectrum.json";
    } else if (mu->parsed()) {
      report = spindirac::cmd_mu_curve(cfg);
      name = "report_mu_curve.json";
    } else if (solve->parsed()) {
      report = spindirac::cmd_solve(cfg, sol_path);
      name = "report_solve.json";
    } else if (surface->parsed()) {
      report = spindirac::cmd_surface(cfg, *sol_path, f.verify_only);
      name = "report_surface.json";
    } else {
      report = spindirac::cmd_check(cfg, sol_path);
      name = "report_check.json";
    }
    const bool write = !(surface->parsed() && f.verify_only);
    if (write) spindirac::write_json(report, std::filesystem::path(cfg.out_dir) / name);
    std::cout << report.dump(2) << '\n';
    if (check->parsed() && !spindirac::report_passes(report)) return kExitCheck;
    return 0;
  } catch (const spindirac::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const spindirac::InvalidLatticeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const spindirac::DegenerateInputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const spindirac::SizeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const spindirac::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const spindirac::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
}
