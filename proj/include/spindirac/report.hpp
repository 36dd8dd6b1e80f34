#pragma once

// Subcommand drivers. Each returns a JSON report; numeric entries that were
// checked against a tolerance are objects {value, tol, pass}.

#include <filesystem>
#include <optional>
#include <string>

#include "spindirac/config.hpp"
#include "spindirac/field_io.hpp"
#include "spindirac/weierstrass.hpp"

namespace spindirac {

Json tagged(double value, double tol, bool pass);

inline constexpr const char* kVerdictBelow = "below 2√π: minimizer regime";
inline constexpr const char* kVerdictFails = "threshold not met; existence theorem hypothesis fails";

/// Verdict for the scale-invariant eigenvalue against λ_min⁺(S²) = 2√π
/// (strict). For spectra this is λ₁⁺·√area; for p = 4 solutions with
/// ‖φ‖₄ = 1 it is λ itself.
std::string threshold_verdict(double lambda_sqrt_area);
Json threshold_entry(double lambda_sqrt_area);

/// Summary of the conformal factor |φ|⁴ of g = |φ|⁴g₀, including the grid
/// of values.
Json conformal_factor_summary(const SpinorField& phi);

Json cmd_spectrum(const RunConfig& cfg);
Json cmd_mu_curve(const RunConfig& cfg);

/// Runs the continuation (or a p = 4 Newton polish of `resume`), writes
/// <out>/solution.json.
Json cmd_solve(const RunConfig& cfg, const std::optional<std::filesystem::path>& resume = {});

/// Integrates the Weierstrass data of a p = 4 solution and, unless
/// verify_only, writes <out>/surface.obj and its sidecar.
Json cmd_surface(const RunConfig& cfg, const std::filesystem::path& solution,
                 bool verify_only = false);

/// Verifies a solution file (residual, normalization, zero bound, surface
/// diagnostics), or without one the spectrum of the configured torus.
Json cmd_check(const RunConfig& cfg, const std::optional<std::filesystem::path>& solution = {});

/// False if any {pass: false} entry occurs anywhere in the report.
bool report_passes(const Json& report);

}  // namespace spindirac
