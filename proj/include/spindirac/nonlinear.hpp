#pragma once

#include <string>
#include <vector>

#include "spindirac/errors.hpp"
#include "spindirac/variational.hpp"

namespace spindirac {

/// Dφ - λ|φ|^{p-2}φ, with 0^{p-2}·0 = 0.
SpinorField residual_field(const SpinorField& phi, double lambda, double p);

enum class LambdaMode {
  Fixed,       // λ given, solve for φ only
  Normalized,  // λ unknown, constraint ‖φ‖_p = 1
};

struct NewtonOptions {
  double tol_solve = 0.0;  // 0 selects 1e-9·n
  double tol_norm = 1e-10;
  int max_newton = 50;
  int max_krylov = 2000;
  double krylov_rtol = 1e-12;
  double min_damping = 1.0 / 1024.0;
};

struct TraceEntry {
  double p = 0.0;
  double lambda = 0.0;
  double sup_norm = 0.0;  // ‖φ_p‖_∞
  double residual = 0.0;
  int newton_iterations = 0;
};

/// A Newton step or continuation step that did not converge. Carries the
/// trace of the completed steps.
class ContinuationError : public Error {
 public:
  ContinuationError(const std::string& what, std::vector<TraceEntry> trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::vector<TraceEntry>& trace() const { return trace_; }

 private:
  std::vector<TraceEntry> trace_;
};

struct ExponentSolve {
  Solution solution;
  int newton_iterations = 0;
};

/// Damped Newton on {residual_field = 0, ‖φ‖_p = 1} (λ unknown) or on
/// residual_field = 0 (λ fixed). The Jacobian is applied matrix-free as a
/// real-linear operator; its bordered form is symmetric and solved by MINRES.
ExponentSolve solve_at_exponent(double p, LambdaMode mode, const SpinorField& init,
                                double lambda_init, const NewtonOptions& opts = {});

/// Same, with λ started from ∫⟨Dφ,φ⟩/∫|φ|^p after rescaling init to ‖·‖_p = 1.
ExponentSolve solve_at_exponent(double p, const SpinorField& init,
                                const NewtonOptions& opts = {});

struct ContinuationSchedule {
  std::vector<double> p_values{2.0, 2.5, 3.0, 3.5, 3.8, 3.95, 4.0};
  NewtonOptions newton;

  /// Throws ValidationError unless first = 2, last = 4, strictly increasing.
  void validate() const;
};

struct CriticalSolve {
  Solution solution;  // at p = 4
  std::vector<TraceEntry> trace;
};

/// Chains solve_at_exponent over the schedule with warm starts. `init`
/// defaults to the first positive eigenspinor.
CriticalSolve solve_critical(const Lattice& lat, const SpinStructure& spin, int n,
                             const ContinuationSchedule& schedule = {});
CriticalSolve solve_critical(const SpinorField& init, const ContinuationSchedule& schedule = {});

/// ∫⟨Dφ, φ⟩ / ∫|φ|^p
double lambda_consistency(const SpinorField& phi, double p);

/// λ·√area < λ_min⁺(S²) = 2√π (strict).
bool below_sphere_threshold(double lambda_sqrt_area);

}  // namespace spindirac
