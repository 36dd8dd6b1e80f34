#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "spindirac/dirac.hpp"
#include "spindirac/errors.hpp"

using namespace spindirac;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

SpinorField random_field(const Lattice& lat, const SpinStructure& s, int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  return random_band_limited(lat, s, n, n / 2 - 1, rng);
}

double max_diff(const SpinorField& a, const SpinorField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max({m, std::abs(a.plus()[i] - b.plus()[i]), std::abs(a.minus()[i] - b.minus()[i])});
  }
  return m;
}

}  // namespace

TEST_CASE("spinor field validates its grid") {
  const Lattice lat({1.0, 0.0}, {0.0, 1.0});
  CHECK_THROWS_AS(SpinorField(lat, SpinStructure(), 7), SizeError);
  CHECK_THROWS_AS(SpinorField(lat, SpinStructure(), 2), SizeError);
  SpinorField a(lat, SpinStructure(), 8);
  SpinorField b(lat, SpinStructure(1, -1), 8);
  CHECK_THROWS_AS(inner(a, b), SizeError);
}

TEST_CASE("plane-wave eigenspinors have eigenvalue sign * 2 pi |xi|") {
  const Lattice lat = make_lattice({1.1, 0.2}, {-0.3, 0.8});
  for (int i = 0; i < 4; ++i) {
    const SpinStructure s = SpinStructure::from_index(i);
    const DualModeSet modes(lat, s);
    for (auto [m, k] : {std::pair{0, 0}, {1, -2}, {-3, 1}}) {
      for (int sign : {1, -1}) {
        const SpinorField phi = mode_eigenspinor(lat, s, 12, m, k, sign);
        const double lam = sign * kTwoPi * norm(modes.mode(m, k).xi);
        if (lam == 0.0) continue;
        const SpinorField d = apply_dirac(phi);
        CHECK(max_diff(d, lam * phi) < 1e-11);
        CHECK(l2_norm(phi) == doctest::Approx(1.0));
      }
    }
  }
}

TEST_CASE("D is symmetric and D^2 acts as 4 pi^2 |xi|^2 on every mode") {
  const Lattice lat = make_lattice({0.9, 0.0}, {0.4, 1.3});
  const SpinStructure s(-1, 1);
  const int n = 12;
  const SpinorField a = random_field(lat, s, n, 1);
  const SpinorField b = random_field(lat, s, n, 2);
  const cplx lhs = inner(apply_dirac(a), b);
  const cplx rhs = inner(a, apply_dirac(b));
  CHECK(std::abs(lhs - rhs) < 1e-10);

  // Independent check of D² through the scalar Laplacian of each component.
  const SpinorField dd = apply_dirac(apply_dirac(a));
  const SpinorModes c = to_modes(a);
  const SpinorModes cd = to_modes(dd);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const double fm = frequency(p, n) + s.frac1();
      const double fk = frequency(q, n) + s.frac2();
      const Vec2 xi = fm * lat.dual1() + fk * lat.dual2();
      const double w = kTwoPi * kTwoPi * dot(xi, xi);
      CHECK(std::abs(cd.plus[p * n + q] - w * c.plus[p * n + q]) < 1e-9);
      CHECK(std::abs(cd.minus[p * n + q] - w * c.minus[p * n + q]) < 1e-9);
    }
  }
}

TEST_CASE("inverse of D^2 on the kernel complement") {
  const Lattice lat({1.0, 0.0}, {0.0, 1.0});
  const SpinorField a = project_out_kernel(random_field(lat, SpinStructure(), 8, 3));
  const SpinorField back = apply_inverse_dirac_squared(apply_dirac(apply_dirac(a)));
  CHECK(max_diff(back, a) < 1e-12);
  SpinorField constant(lat, SpinStructure(), 8);
  for (auto& z : constant.plus()) z = cplx(0.3, -1.0);
  CHECK(max_abs(apply_dirac(constant)) < 1e-13);
  CHECK(max_abs(project_out_kernel(constant)) < 1e-15);
}

TEST_CASE("dense spectrum agrees with the closed form on resolved modes") {
  const Lattice sq({1.0, 0.0}, {0.0, 1.0});
  const auto ev = dirac_eigenvalues_numeric(sq, SpinStructure(), 8);
  CHECK(ev.size() == 128);
  const auto zeros = std::count_if(ev.begin(), ev.end(), [](double v) { return std::abs(v) < 1e-10; });
  CHECK(zeros == 2);

  const auto pairs = dirac_spectrum_numeric(sq, SpinStructure(1, -1), 8, 6);
  REQUIRE(pairs.size() == 6);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(pairs[i].value) == doctest::Approx(std::numbers::pi));
  for (const auto& p : pairs) {
    CHECK(max_diff(apply_dirac(p.field), p.value * p.field) < 1e-9);
  }
  CHECK_THROWS_AS(dirac_eigenvalues_numeric(sq, SpinStructure(), 26), SizeError);
}

TEST_CASE("first positive eigenspinor has constant length") {
  for (int i = 0; i < 4; ++i) {
    const Lattice lat = make_lattice({1.0, 0.1}, {0.2, 1.4});
    const SpinStructure s = SpinStructure::from_index(i);
    const SpinorField phi = first_positive_eigenspinor(lat, s, 16);
    const double lam = first_positive_eigenvalue(lat, s);
    CHECK(max_diff(apply_dirac(phi), lam * phi) < 1e-10);
    CHECK(max_abs(phi) - min_abs(phi) < 1e-13);
    CHECK(l2_norm(phi) == doctest::Approx(1.0));
  }
}

TEST_CASE("norms and pointwise powers") {
  const Lattice lat({2.0, 0.0}, {0.0, 0.5});
  SpinorField phi(lat, SpinStructure(), 8);
  for (std::size_t i = 0; i < phi.size(); ++i) phi.plus()[i] = cplx(0.0, 2.0);
  phi.plus()[5] = 0.0;
  phi.minus()[5] = 0.0;
  const SpinorField w = pointwise_power(phi, -0.5);
  CHECK(std::abs(w.plus()[5]) == 0.0);
  CHECK(std::abs(w.plus()[0] - cplx(0.0, 2.0 / std::sqrt(2.0))) < 1e-15);
  const double expect = 16.0 * (63.0 / 64.0);  // |φ|⁴ = 16 on 63 of 64 cells, area 1
  CHECK(lp_integral(phi, 4.0) == doctest::Approx(expect));
  CHECK(min_abs(phi) == 0.0);
  CHECK(max_abs(phi) == doctest::Approx(2.0));
}
