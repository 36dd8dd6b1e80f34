#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace spindirac {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// The flat torus R²/Γ, Γ = span_Z{gamma1, gamma2}, positively oriented.
class Lattice {
 public:
  Lattice(Vec2 gamma1, Vec2 gamma2);

  Vec2 gamma1() const { return gamma1_; }
  Vec2 gamma2() const { return gamma2_; }
  double area() const { return cross(gamma1_, gamma2_); }

  /// Dual basis with ⟨dual_i, gamma_j⟩ = δ_ij.
  Vec2 dual1() const;
  Vec2 dual2() const;

  /// Physical point s·gamma1 + t·gamma2.
  Vec2 point(double s, double t) const { return s * gamma1_ + t * gamma2_; }

  /// Homothety by c > 0.
  Lattice scaled(double c) const;

  friend bool operator==(const Lattice&, const Lattice&) = default;

 private:
  Vec2 gamma1_;
  Vec2 gamma2_;
};

/// Builds a lattice, swapping the generators if they are negatively
/// oriented. Throws InvalidLatticeError when they are collinear.
Lattice make_lattice(Vec2 v1, Vec2 v2);

/// A spin structure on a torus is its holonomy χ: Γ → {±1}, fixed by the
/// signs on the two generators.
struct SpinStructure {
  int eps1 = 1;
  int eps2 = 1;

  SpinStructure() = default;
  SpinStructure(int e1, int e2);

  bool trivial() const { return eps1 == 1 && eps2 == 1; }
  /// 0 for eps = +1, 1/2 for eps = -1.
  double frac1() const { return eps1 == 1 ? 0.0 : 0.5; }
  double frac2() const { return eps2 == 1 ? 0.0 : 0.5; }

  static SpinStructure from_index(int i);  // 0..3
  friend bool operator==(const SpinStructure&, const SpinStructure&) = default;
};

/// Fourier shift δ with ⟨δ, gamma_i⟩ ∈ {0, 1/2}, half-integer exactly when
/// eps_i = -1.
Vec2 spin_shift(const Lattice& lat, const SpinStructure& s);

/// A χ-twisted Fourier mode ξ = (a/2)·gamma1* + (b/2)·gamma2*. The pairings
/// ⟨ξ, gamma_i⟩ are the half-integers a/2, b/2, kept exactly.
struct DualMode {
  std::int64_t twice1 = 0;
  std::int64_t twice2 = 0;
  Vec2 xi;

  double pairing1() const { return 0.5 * static_cast<double>(twice1); }
  double pairing2() const { return 0.5 * static_cast<double>(twice2); }
  /// exp(2πi⟨ξ, gamma_i⟩) ∈ {±1}, computed from the exact pairing.
  int holonomy1() const { return (twice1 % 2 == 0) ? 1 : -1; }
  int holonomy2() const { return (twice2 % 2 == 0) ? 1 : -1; }
};

/// Mode set of χ-twisted sections: Γ* + δ.
class DualModeSet {
 public:
  DualModeSet(const Lattice& lat, const SpinStructure& s);

  Vec2 shift() const { return shift_; }
  const Lattice& lattice() const { return lat_; }
  const SpinStructure& spin() const { return spin_; }

  /// Mode with pairings (m + frac1, k + frac2).
  DualMode mode(std::int64_t m, std::int64_t k) const;

  /// All modes with |ξ| ≤ radius, sorted by |ξ| then (m, k).
  std::vector<DualMode> modes_within(double radius) const;

 private:
  Lattice lat_;
  SpinStructure spin_;
  Vec2 shift_;
};

struct SpectralValue {
  double value = 0.0;
  int multiplicity = 0;  // complex multiplicity
};

/// Flat-torus Dirac spectrum ±2π|ξ|, ξ ∈ Γ* + δ. Returns at least `count`
/// eigenvalues (counted with complex multiplicity) of smallest |value|,
/// grouped by value, ascending. A group is never split.
std::vector<SpectralValue> closed_form_spectrum(const Lattice& lat, const SpinStructure& s,
                                                int count);

/// Smallest positive eigenvalue 2π·min|ξ| over nonzero modes.
double first_positive_eigenvalue(const Lattice& lat, const SpinStructure& s);

/// Volume of the round unit n-sphere, ω_n = 2π^{(n+1)/2}/Γ((n+1)/2).
double sphere_volume(int n);

/// λ_min⁺(Sⁿ) = (n/2)·ω_n^{1/n}.
double sphere_lambda_min(int n);

}  // namespace spindirac
