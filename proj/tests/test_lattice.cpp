#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "doctest.h"

#include "spindirac/errors.hpp"
#include "spindirac/lattice.hpp"

using namespace spindirac;

namespace {

// Brute-force |eigenvalue| list with multiplicities from an explicit index box.
std::map<long long, int> brute_abs_spectrum(const Lattice& lat, const SpinStructure& s, int box,
                                            double max_value) {
  std::map<long long, int> out;
  const double f1 = s.eps1 == 1 ? 0.0 : 0.5;
  const double f2 = s.eps2 == 1 ? 0.0 : 0.5;
  for (int m = -box; m <= box; ++m) {
    for (int k = -box; k <= box; ++k) {
      // Physical ξ solving ⟨ξ, γ_i⟩ = pairing_i.
      const double a = m + f1, b = k + f2;
      const Vec2 g1 = lat.gamma1(), g2 = lat.gamma2();
      const double det = g1.x * g2.y - g1.y * g2.x;
      const double x = (a * g2.y - b * g1.y) / det;
      const double y = (b * g1.x - a * g2.x) / det;
      const double v = 2.0 * std::numbers::pi * std::hypot(x, y);
      if (v <= max_value) out[std::llround(v * 1e8)] += 1;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("make_lattice orients and rejects collinear generators") {
  const Lattice lat = make_lattice({0.0, 1.0}, {1.0, 0.0});
  CHECK(lat.area() > 0.0);
  CHECK(lat.area() == doctest::Approx(1.0));
  CHECK_THROWS_AS(make_lattice({1.0, 2.0}, {2.0, 4.0}), InvalidLatticeError);
  CHECK_THROWS_AS(Lattice({0.0, 1.0}, {1.0, 0.0}), InvalidLatticeError);
}

TEST_CASE("dual basis pairs to the identity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Lattice lat = make_lattice({1.0 + 0.3 * u(rng), 0.4 * u(rng)}, {0.5 * u(rng), 1.0 + 0.3 * u(rng)});
    CHECK(dot(lat.dual1(), lat.gamma1()) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(dot(lat.dual1(), lat.gamma2())) < 1e-14);
    CHECK(std::abs(dot(lat.dual2(), lat.gamma1())) < 1e-14);
    CHECK(dot(lat.dual2(), lat.gamma2()) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("spin shift pairings are half-integers exactly for eps = -1") {
  const Lattice lat = make_lattice({1.2, 0.1}, {0.3, 0.9});
  for (int i = 0; i < 4; ++i) {
    const SpinStructure s = SpinStructure::from_index(i);
    const Vec2 d = spin_shift(lat, s);
    CHECK(dot(d, lat.gamma1()) == doctest::Approx(s.eps1 == 1 ? 0.0 : 0.5));
    CHECK(dot(d, lat.gamma2()) == doctest::Approx(s.eps2 == 1 ? 0.0 : 0.5));
    const DualModeSet modes(lat, s);
    const DualMode m = modes.mode(3, -2);
    CHECK(m.holonomy1() == s.eps1);
    CHECK(m.holonomy2() == s.eps2);
  }
  CHECK_THROWS_AS(SpinStructure(2, 1), DomainError);
}

TEST_CASE("closed-form spectrum of the unit square") {
  const Lattice sq({1.0, 0.0}, {0.0, 1.0});
  const auto trivial = closed_form_spectrum(sq, SpinStructure(1, 1), 2);
  REQUIRE(!trivial.empty());
  CHECK(trivial[0].value == 0.0);
  CHECK(trivial[0].multiplicity == 2);

  const auto twisted = closed_form_spectrum(sq, SpinStructure(1, -1), 4);
  int total = 0;
  for (const auto& g : twisted) total += g.multiplicity;
  CHECK(total >= 4);
  CHECK(first_positive_eigenvalue(sq, SpinStructure(1, -1)) == doctest::Approx(std::numbers::pi));
  CHECK(first_positive_eigenvalue(sq, SpinStructure(1, 1)) == doctest::Approx(2.0 * std::numbers::pi));
}

TEST_CASE("closed-form multiplicities agree with brute-force enumeration") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  for (int trial = 0; trial < 8; ++trial) {
    const Lattice lat = make_lattice({1.0 + u(rng), u(rng)}, {u(rng), 1.0 + u(rng)});
    for (int i = 0; i < 4; ++i) {
      const SpinStructure s = SpinStructure::from_index(i);
      const auto groups = closed_form_spectrum(lat, s, 30);
      double top = 0.0;
      int total = 0;
      std::map<long long, int> got;
      for (const auto& g : groups) {
        top = std::max(top, std::abs(g.value));
        total += g.multiplicity;
        got[std::llround(std::abs(g.value) * 1e8)] += g.multiplicity;
      }
      CHECK(total >= 30);
      // Each mode carries the pair ±2π|ξ| (both kernel directions at ξ = 0).
      auto brute = brute_abs_spectrum(lat, s, 40, top * (1.0 + 1e-12));
      for (auto& [k, v] : brute) v *= 2;
      CHECK(got == brute);
    }
  }
}

TEST_CASE("rectangular tori with eps = (+1,-1) reach pi/sqrt(y)") {
  for (double y : {1.0, 2.0, 4.0}) {
    const Lattice lat({1.0, 0.0}, {0.0, y});
    const double v = first_positive_eigenvalue(lat, SpinStructure(1, -1)) * std::sqrt(lat.area());
    CHECK(std::abs(v - std::numbers::pi / std::sqrt(y)) < 1e-12);
  }
}

TEST_CASE("sphere constants") {
  CHECK(sphere_volume(1) == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(sphere_volume(2) == doctest::Approx(4.0 * std::numbers::pi));
  CHECK(std::abs(sphere_lambda_min(2) - 2.0 * std::sqrt(std::numbers::pi)) < 1e-12);
  CHECK(sphere_lambda_min(3) == doctest::Approx(1.5 * std::cbrt(2.0 * std::numbers::pi * std::numbers::pi)));
  CHECK_THROWS_AS(sphere_lambda_min(1), DomainError);
}
