#pragma once

// Run configuration. Two formats are accepted: sectioned key-value text
//
//   [lattice]
//   gamma1 = 1 0
//   gamma2 = 0 1
//   [spin]
//   eps1 = 1
//   eps2 = -1
//   [grid]
//   n = 32
//
// and the same structure as a JSON object ({"lattice": {"gamma1": [1, 0], ...}}).
// Unknown sections or keys are rejected.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spindirac/field_io.hpp"
#include "spindirac/nonlinear.hpp"

namespace spindirac {

struct RunConfig {
  Vec2 gamma1{1.0, 0.0};
  Vec2 gamma2{0.0, 1.0};
  int eps1 = 1;
  int eps2 = -1;
  int n = 32;

  // solver
  std::vector<double> schedule{2.0, 2.5, 3.0, 3.5, 3.8, 3.95, 4.0};
  std::optional<double> tol_solve;  // default 1e-9·n
  double tol_norm = 1e-10;
  int max_newton = 50;

  // variational
  std::vector<double> q_values{1.4, 1.5, 1.6, 1.8, 2.0};
  std::optional<double> tol_grad;  // default 1e-8·mu_grid
  int max_iter = 5000;
  int mu_grid = 16;
  double perturbation = 1e-2;

  // surface
  double tol_closed = 1e-6;
  double tol_conformal = 1e-8;
  double tol_cmc = 1e-2;
  double zero_tol = 1e-6;

  // output
  std::string out_dir = "out";
  int copies1 = 1;
  int copies2 = 1;

  unsigned long long seed = 1;

  Lattice lattice() const;  // positively oriented
  SpinStructure spin() const { return {eps1, eps2}; }
  double tol_solve_value() const { return tol_solve.value_or(1e-9 * n); }
  double tol_grad_value() const { return tol_grad.value_or(1e-8 * mu_grid); }
  ContinuationSchedule continuation() const;

  /// Throws ValidationError naming the offending field.
  void validate() const;
  Json to_json() const;
};

RunConfig parse_config_text(std::istream& in, const std::string& source = "<config>");
RunConfig parse_config_json(const Json& j);
/// Dispatches on the extension: ".json" is JSON, anything else key-value.
RunConfig load_config(const std::filesystem::path& path);

/// Parses "K1xK2".
std::pair<int, int> parse_copies(const std::string& text);

}  // namespace spindirac
