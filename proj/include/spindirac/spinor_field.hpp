#pragma once

#include <complex>
#include <span>
#include <vector>

#include "spindirac/lattice.hpp"
#include "spindirac/spectral.hpp"

namespace spindirac {

/// A spinor field φ = (φ₊, φ₋) on R²/Γ sampled at x_jl = (j/n)·gamma1 +
/// (l/n)·gamma2, j, l ∈ [0, n). The samples are the values of the χ-twisted
/// field on the fundamental domain; the twist lives in the Fourier shift.
class SpinorField {
 public:
  /// Zero field. n must be even and ≥ 4.
  SpinorField(const Lattice& lat, const SpinStructure& spin, int n);
  SpinorField(const Lattice& lat, const SpinStructure& spin, int n, std::vector<cplx> plus,
              std::vector<cplx> minus);

  const Lattice& lattice() const { return lat_; }
  const SpinStructure& spin() const { return spin_; }
  int n() const { return n_; }
  std::size_t size() const { return plus_.size(); }

  std::span<const cplx> plus() const { return plus_; }
  std::span<const cplx> minus() const { return minus_; }
  std::span<cplx> plus() { return plus_; }
  std::span<cplx> minus() { return minus_; }

  std::size_t index(int j, int l) const { return static_cast<std::size_t>(j) * n_ + l; }
  Vec2 sample_point(int j, int l) const {
    return lat_.point(static_cast<double>(j) / n_, static_cast<double>(l) / n_);
  }

  /// |φ|² at sample i.
  double norm2_at(std::size_t i) const { return std::norm(plus_[i]) + std::norm(minus_[i]); }
  double abs_at(std::size_t i) const { return std::sqrt(norm2_at(i)); }

  /// Quadrature weight area/n².
  double cell_area() const { return lat_.area() / (static_cast<double>(n_) * n_); }

  /// Same lattice, spin structure and grid.
  bool compatible(const SpinorField& other) const;

  SpinorField& operator+=(const SpinorField& o);
  SpinorField& operator-=(const SpinorField& o);
  SpinorField& operator*=(cplx a);

  friend SpinorField operator+(SpinorField a, const SpinorField& b) { return a += b; }
  friend SpinorField operator-(SpinorField a, const SpinorField& b) { return a -= b; }
  friend SpinorField operator*(cplx a, SpinorField b) { return b *= a; }
  friend SpinorField operator*(double a, SpinorField b) { return b *= cplx(a, 0.0); }

  /// this + a·o
  void axpy(cplx a, const SpinorField& o);

  /// Same samples on a homothetic lattice c·Γ.
  SpinorField on_lattice(const Lattice& lat) const;

 private:
  Lattice lat_;
  SpinStructure spin_;
  int n_;
  std::vector<cplx> plus_;
  std::vector<cplx> minus_;
};

}  // namespace spindirac
