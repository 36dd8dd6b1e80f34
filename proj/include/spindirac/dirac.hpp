#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "spindirac/spinor_field.hpp"

namespace spindirac {

// The flat Dirac operator acts on a mode e^{2πi⟨ξ,x⟩} by the Hermitian symbol
//
//   2π [ 0   w ]      w = ξ₁ + iξ₂,
//      [ w̄   0 ]
//
// i.e. D = -2i (0, ∂̄; ∂, 0) in unit-norm frames, eigenvalues ±2π|ξ|. This is
// the convention under which Re α of the Weierstrass data is closed on
// solutions of Dφ = H|φ|²φ; see weierstrass.hpp.

/// Mode coefficients of both halves. Index (a, b) holds the mode with
/// pairings (frequency(a) + frac1, frequency(b) + frac2).
struct SpinorModes {
  std::vector<cplx> plus;
  std::vector<cplx> minus;
};

SpinorModes to_modes(const SpinorField& phi);
SpinorField from_modes(const Lattice& lat, const SpinStructure& spin, int n,
                       const SpinorModes& modes);

/// Physical frequency ξ of FFT index (a, b).
Vec2 grid_mode(const Lattice& lat, const SpinStructure& spin, int n, int a, int b);

SpinorField apply_dirac(const SpinorField& phi);

/// D⁻² on (ker D)^⊥, zero on ker D.
SpinorField apply_inverse_dirac_squared(const SpinorField& phi);

/// L²-orthogonal projection onto (ker D)^⊥. Identity for nontrivial spin.
SpinorField project_out_kernel(const SpinorField& phi);

/// ∫⟨a, b⟩ with ⟨a, b⟩ = conj(a₊)b₊ + conj(a₋)b₋, uniform-grid quadrature.
cplx inner(const SpinorField& a, const SpinorField& b);
double l2_norm(const SpinorField& phi);
/// (∫|φ|^p)^{1/p}; p ≥ 1.
double lp_norm(const SpinorField& phi, double p);
/// ∫|φ|^p
double lp_integral(const SpinorField& phi, double p);
double max_abs(const SpinorField& phi);
double min_abs(const SpinorField& phi);

/// |φ|^{e}·φ pointwise with 0^{e}·0 = 0 for any real e.
SpinorField pointwise_power(const SpinorField& phi, double e);

/// Pure mode e^{2πi⟨ξ,x⟩}·v with v the unit eigenvector of the symbol for
/// sign·2π|ξ| (v = (1,0) when ξ = 0), scaled to unit L² norm.
SpinorField mode_eigenspinor(const Lattice& lat, const SpinStructure& spin, int n,
                             std::int64_t m, std::int64_t k, int sign);

/// Eigenspinor of the smallest positive eigenvalue, constant length, unit
/// L² norm. The mode is chosen deterministically.
SpinorField first_positive_eigenspinor(const Lattice& lat, const SpinStructure& spin, int n);

/// Random field with mode coefficients on |frequency| ≤ max_freq, amplitudes
/// decaying like 1/(1 + |ξ|²), unit L² norm.
SpinorField random_band_limited(const Lattice& lat, const SpinStructure& spin, int n,
                                int max_freq, std::mt19937_64& rng);

struct EigenPair {
  double value = 0.0;
  SpinorField field;
};

/// Dense diagonalization of apply_dirac on the 2n² sample basis (n ≤ 24).
/// Returns the k eigenpairs nearest 0, sorted by |value| then value.
std::vector<EigenPair> dirac_spectrum_numeric(const Lattice& lat, const SpinStructure& spin,
                                              int n, int k);

/// All 2n² eigenvalues of the dense operator, ascending.
std::vector<double> dirac_eigenvalues_numeric(const Lattice& lat, const SpinStructure& spin,
                                              int n);

}  // namespace spindirac
