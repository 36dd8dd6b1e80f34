#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spindirac/errors.hpp"
#include "spindirac/spinor_field.hpp"

namespace spindirac {

/// Critical exponents for surfaces: q_D = 2n/(n+1), p_D = 2n/(n-1) with n = 2.
inline constexpr double kCriticalQ = 4.0 / 3.0;
inline constexpr double kCriticalP = 4.0;

/// Hölder conjugate: 1/p + 1/q = 1.
inline double conjugate_exponent(double q) { return q / (q - 1.0); }

inline constexpr double kDegenerateTol = 1e-12;

/// Evaluation of F_q(φ) = ∫⟨Dφ, φ⟩ / ‖Dφ‖²_q together with the quantities its
/// gradient needs.
struct FunctionalState {
  double q = 2.0;
  double value = 0.0;       // F_q(φ)
  double numerator = 0.0;   // Re ∫⟨Dφ, φ⟩
  double numerator_imag = 0.0;
  double dphi_q_norm = 0.0; // ‖Dφ‖_q
  double rho = 0.0;         // F_q(φ)·‖Dφ‖_q^{2-q}

  double p() const { return conjugate_exponent(q); }
};

FunctionalState evaluate_functional(const SpinorField& phi, double q);

/// F_q(φ). Throws DegenerateInputError if ‖Dφ‖_q ≤ kDegenerateTol.
double functional_Fq(const SpinorField& phi, double q);

/// L²-gradient G with Re⟨G, ψ⟩ = dF_q(φ)(ψ):
/// G = 2/‖Dφ‖²_q · D(φ - ρ|Dφ|^{q-2}Dφ).
SpinorField grad_Fq(const SpinorField& phi, double q);

struct AscentOptions {
  double tol_grad = 0.0;     // 0 selects 1e-8·n
  int max_iter = 5000;
  double armijo = 1e-4;
  double backtrack = 0.5;
  double initial_step = 1.0;
  double min_step = 1e-14;
};

struct AscentResult {
  SpinorField phi;        // ‖Dφ‖_q = 1, orthogonal to ker D
  double mu = 0.0;        // F_q(phi)
  double grad_norm = 0.0; // ‖grad F_q‖_{L²}
  int iterations = 0;
  bool converged = false;
};

/// Raised when the ascent exhausts max_iter or stalls above tol_grad.
class IterationLimitError : public Error {
 public:
  IterationLimitError(const std::string& what, AscentResult best)
      : Error(what), best_(std::move(best)) {}
  const AscentResult& best() const { return best_; }

 private:
  AscentResult best_;
};

/// Maximizes F_q by gradient ascent with Armijo backtracking. The step
/// direction is the gradient for the inner product ⟨Dψ₁, Dψ₂⟩ on (ker D)^⊥,
/// i.e. D⁻²·G; iterates stay orthogonal to ker D and are renormalized to
/// ‖Dφ‖_q = 1 after each accepted step. Accepted steps never decrease F_q.
/// The result is a stationary, locally maximal point, not a certified global
/// maximizer.
AscentResult maximize_Fq(const SpinorField& init, double q, const AscentOptions& opts = {});

/// Initial guess used by the sweeps: first positive eigenspinor plus a
/// band-limited random perturbation of relative size `amplitude`.
SpinorField perturbed_eigenspinor(const Lattice& lat, const SpinStructure& spin, int n,
                                  double amplitude, unsigned long long seed);

/// Solution of Dφ = λ|φ|^{p-2}φ, ‖φ‖_p = 1.
struct Solution {
  SpinorField phi;
  double lambda = 0.0;
  double p = 2.0;
  double residual = 0.0;  // ‖Dφ - λ|φ|^{p-2}φ‖_{L²}
  double norm_p = 0.0;    // ‖φ‖_p
  /// Fraction of samples where Dφ_max vanished and the 0^{q-2}·0 = 0
  /// convention was used.
  double zero_fraction = 0.0;
};

/// Euler–Lagrange normalization of a maximizer with ‖Dφ_max‖_q = 1:
/// φ = μ⁻¹φ₂, φ₂ = μ|Dφ_max|^{q-2}Dφ_max, which solves Dφ = μ⁻¹|φ|^{p-2}φ
/// with ‖φ‖_p = 1.
Solution normalize_euler_lagrange(const SpinorField& phi_max, double q, double mu);

struct MuCurveRow {
  double q = 0.0;
  double mu = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string error;  // non-empty if this entry failed
};

struct MuCurveOptions {
  AscentOptions ascent;
  int n = 16;
  double perturbation = 1e-2;
  unsigned long long seed = 1;
};

/// μ_q over a list of exponents on the area-1 rescaling of `lat`, swept in
/// descending q with warm starts. Returned sorted by ascending q.
std::vector<MuCurveRow> mu_curve(const Lattice& lat, const SpinStructure& spin,
                                 const std::vector<double>& q_values,
                                 const MuCurveOptions& opts = {});

}  // namespace spindirac
