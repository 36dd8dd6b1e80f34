#include "spindirac/lattice.hpp"

#include <algorithm>
#include <numbers>

#include "spindirac/errors.hpp"

namespace spindirac {

namespace {

// Smallest singular value of the 2x2 matrix with columns a, b.
double smallest_singular_value(Vec2 a, Vec2 b) {
  const double p = dot(a, a) + dot(b, b);
  const double d = std::abs(cross(a, b));
  const double disc = std::sqrt(std::max(0.0, p * p - 4.0 * d * d));
  return std::sqrt(std::max(0.0, 0.5 * (p - disc)));
}

}  // namespace

Lattice::Lattice(Vec2 gamma1, Vec2 gamma2) : gamma1_(gamma1), gamma2_(gamma2) {
  if (!(cross(gamma1_, gamma2_) > 0.0)) {
    throw InvalidLatticeError("lattice generators must be positively oriented and independent");
  }
}

Vec2 Lattice::dual1() const {
  const double det = area();
  return {gamma2_.y / det, -gamma2_.x / det};
}

Vec2 Lattice::dual2() const {
  const double det = area();
  return {-gamma1_.y / det, gamma1_.x / det};
}

Lattice Lattice::scaled(double c) const {
  if (!(c > 0.0)) throw DomainError("homothety factor must be positive");
  return Lattice(c * gamma1_, c * gamma2_);
}

Lattice make_lattice(Vec2 v1, Vec2 v2) {
  const double det = cross(v1, v2);
  const double scale = norm(v1) * norm(v2);
  if (!std::isfinite(det) || scale == 0.0 || std::abs(det) <= 1e-14 * scale) {
    throw InvalidLatticeError("degenerate lattice generators (det = 0)");
  }
  if (det < 0.0) std::swap(v1, v2);
  return Lattice(v1, v2);
}

SpinStructure::SpinStructure(int e1, int e2) : eps1(e1), eps2(e2) {
  if ((e1 != 1 && e1 != -1) || (e2 != 1 && e2 != -1)) {
    throw DomainError("spin signs must be +1 or -1");
  }
}

SpinStructure SpinStructure::from_index(int i) {
  if (i < 0 || i > 3) throw DomainError("spin structure index must be in 0..3");
  return SpinStructure((i & 1) ? -1 : 1, (i & 2) ? -1 : 1);
}

Vec2 spin_shift(const Lattice& lat, const SpinStructure& s) {
  return s.frac1() * lat.dual1() + s.frac2() * lat.dual2();
}

DualModeSet::DualModeSet(const Lattice& lat, const SpinStructure& s)
    : lat_(lat), spin_(s), shift_(spin_shift(lat, s)) {}

DualMode DualModeSet::mode(std::int64_t m, std::int64_t k) const {
  DualMode out;
  out.twice1 = 2 * m + (spin_.eps1 == 1 ? 0 : 1);
  out.twice2 = 2 * k + (spin_.eps2 == 1 ? 0 : 1);
  out.xi = out.pairing1() * lat_.dual1() + out.pairing2() * lat_.dual2();
  return out;
}

std::vector<DualMode> DualModeSet::modes_within(double radius) const {
  const double sigma = smallest_singular_value(lat_.dual1(), lat_.dual2());
  // |ξ| ≥ σ_min·|(pairing1, pairing2)|, so the window below is exhaustive.
  const auto bound = static_cast<std::int64_t>(std::ceil(radius / sigma)) + 1;
  std::vector<DualMode> out;
  for (std::int64_t m = -bound; m <= bound; ++m) {
    for (std::int64_t k = -bound; k <= bound; ++k) {
      DualMode md = mode(m, k);
      if (norm(md.xi) <= radius) out.push_back(md);
    }
  }
  std::sort(out.begin(), out.end(), [](const DualMode& a, const DualMode& b) {
    const double na = norm(a.xi);
    const double nb = norm(b.xi);
    if (na != nb) return na < nb;
    if (a.twice1 != b.twice1) return a.twice1 < b.twice1;
    return a.twice2 < b.twice2;
  });
  return out;
}

std::vector<SpectralValue> closed_form_spectrum(const Lattice& lat, const SpinStructure& s,
                                                int count) {
  if (count < 1) throw DomainError("count must be >= 1");
  const DualModeSet modes(lat, s);
  const std::size_t needed_modes = static_cast<std::size_t>((count + 1) / 2);

  double radius = 1.0 / std::sqrt(lat.area());
  std::vector<DualMode> found = modes.modes_within(radius);
  while (found.size() < needed_modes) {
    radius *= 2.0;
    found = modes.modes_within(radius);
  }
  // Complete up to the needed |ξ|, plus any ties just beyond it.
  const double cutoff = norm(found[needed_modes - 1].xi);
  found = modes.modes_within(cutoff * (1.0 + 1e-9) + 1e-300);

  std::vector<double> values;
  values.reserve(2 * found.size());
  for (const auto& md : found) {
    const double lam = 2.0 * std::numbers::pi * norm(md.xi);
    values.push_back(lam);
    values.push_back(-lam);
  }
  std::sort(values.begin(), values.end());

  std::vector<SpectralValue> grouped;
  for (double v : values) {
    const double tol = 1e-10 * std::max(1.0, std::abs(v));
    if (!grouped.empty() && std::abs(grouped.back().value - v) <= tol) {
      ++grouped.back().multiplicity;
    } else {
      grouped.push_back({v, 1});
    }
  }
  for (auto& g : grouped) {
    if (std::abs(g.value) < 1e-300) g.value = 0.0;
  }
  return grouped;
}

double first_positive_eigenvalue(const Lattice& lat, const SpinStructure& s) {
  const DualModeSet modes(lat, s);
  double radius = 1.0 / std::sqrt(lat.area());
  for (;;) {
    for (const auto& md : modes.modes_within(radius)) {
      const double r = norm(md.xi);
      if (r > 0.0) return 2.0 * std::numbers::pi * r;
    }
    radius *= 2.0;
  }
}

double sphere_volume(int n) {
  if (n < 1) throw DomainError("sphere dimension must be >= 1");
  const double h = 0.5 * (n + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double sphere_lambda_min(int n) {
  if (n < 2) throw DomainError("sphere_lambda_min requires n >= 2");
  return 0.5 * n * std::pow(sphere_volume(n), 1.0 / n);
}

}  // namespace spindirac
