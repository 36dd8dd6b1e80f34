#pragma once

// Spinorial Weierstrass representation for flat tori.
//
// For φ = (φ₊, φ₋) the R³-valued (0,1)-form
//
//   α = √2 (φ₊² + φ̄₋², i(φ₊² − φ̄₋²), 2iφ₊φ̄₋)
//
// is stored by its coefficients with respect to the unit covector dz̄/√2, so
// dF = Re α = Re(a/√2)·dx + Im(a/√2)·dy. With this normalization |dF| = |φ|²
// and, for solutions of Dφ = H|φ|²φ (Dirac convention of dirac.hpp), d(Re α)
// vanishes and F: R² → R³ is a conformal immersion with mean curvature H,
// branched at the zeros of φ. The products φ₊², φ₊φ̄₋ are Γ-periodic for
// every spin structure, so α and dF are periodic.

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "spindirac/spinor_field.hpp"

namespace spindirac {

using Vec3 = std::array<double, 3>;

struct OneFormField {
  Lattice lattice;
  int n = 0;
  std::array<std::vector<cplx>, 3> coeff;  // a₁, a₂, a₃ at the grid samples
};

OneFormField build_alpha(const SpinorField& phi);

/// L² norm of the coefficient of d(Re α) = c·dx∧dy, computed spectrally. Zero
/// up to discretization for solutions; order one for generic fields.
double closedness_residual(const OneFormField& alpha);

struct BranchPoint {
  Vec2 position;  // physical coordinates in the fundamental domain
  double s = 0.0; // lattice coordinates
  double t = 0.0;
  int order = 0;  // vanishing order of |dF|, even for Weierstrass data
};

struct Immersion {
  Lattice lattice;
  int n = 0;
  std::vector<Vec3> points;  // F at the grid samples, F(0) = 0
  Vec3 period1{};            // F(x + gamma1) - F(x)
  Vec3 period2{};            // F(x + gamma2) - F(x)
  double mean_curvature = 0.0;  // target H
  double closedness = 0.0;      // residual measured before integration
  std::vector<BranchPoint> branch_points;

  const Vec3& at(int j, int l) const { return points[static_cast<std::size_t>(j) * n + l]; }
  /// F at grid index (j, l) for any integers, using the periods.
  Vec3 unwrapped(int j, int l) const;
};

struct IntegrationOptions {
  double tol_closed = 1e-6;
};

/// Integrates dF = Re α: the mean of dF gives the periods, the oscillatory part
/// is integrated mode by mode. Throws ClosednessError when the closedness
/// residual exceeds opts.tol_closed.
Immersion integrate_immersion(const OneFormField& alpha, double target_h,
                              const IntegrationOptions& opts = {});

/// Spectral first derivatives ∂F/∂x, ∂F/∂y at the grid samples.
struct ImmersionDerivatives {
  std::vector<Vec3> dx;
  std::vector<Vec3> dy;
};
ImmersionDerivatives immersion_derivatives(const Immersion& imm);

/// Per-vertex mean curvature of the periodic grid triangulation from the
/// cotangent Laplacian, H = ⟨ΔF, N⟩/2 with N along F_x × F_y.
std::vector<double> discrete_mean_curvature(const Immersion& imm);

/// Area of the image of one fundamental domain, ∫|F_x × F_y| dx dy.
double image_area(const Immersion& imm);

/// Zeros of |dF|, located by grid minima and refined on the spectral
/// interpolant; `order` is the vanishing order of |dF|.
std::vector<BranchPoint> find_branch_points(const Immersion& imm, double zero_tol = 1e-6);

struct CheckEntry {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct CheckReport {
  std::vector<CheckEntry> entries;
  std::vector<BranchPoint> branch_points;
  bool all_pass() const;
  const CheckEntry* find(const std::string& name) const;
};

struct VerifyOptions {
  double tol_conformal = 1e-8;
  double tol_cmc = 1e-2;
  double tol_period = 1e-10;
  double tol_area = 1e-8;
  double zero_tol = 1e-6;
};

/// Conformality, mean curvature, branch orders, period additivity and image
/// area of an integrated immersion against its spinor.
CheckReport verify_immersion(const Immersion& imm, const SpinorField& phi, double h,
                             const VerifyOptions& opts = {});

struct SpinorZero {
  Vec2 position;
  double s = 0.0;
  double t = 0.0;
  int order = 0;  // vanishing order of φ
};

struct ZeroCount {
  std::vector<SpinorZero> zeros;
  double bound = 0.0;  // genus - 1 + λ²/(4π)
  bool ok = false;     // zeros.size() ≤ bound
};

/// `lambda` is the eigenvalue of a solution normalized by ‖φ‖₄ = 1, which
/// equals λ₁⁺(g)·vol(g)^{1/2} for g = |φ|⁴g₀.
ZeroCount count_zeros(const SpinorField& phi, double lambda, int genus = 1,
                      double zero_tol = 1e-6);

/// Writes `path` (OBJ, tiled k1 × k2 using the periods) and a JSON sidecar at
/// `path` with extension ".json". Returns the sidecar path.
std::filesystem::path export_mesh(const Immersion& imm, int k1, int k2,
                                  const std::filesystem::path& path,
                                  const CheckReport* diagnostics = nullptr, double lambda = 0.0);

struct ObjMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;  // 0-based
};

ObjMesh read_obj(const std::filesystem::path& path);

}  // namespace spindirac
