#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "spindirac/spectral.hpp"

using namespace spindirac;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<cplx> sample(int n, auto f) {
  std::vector<cplx> v(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) v[static_cast<std::size_t>(j) * n + l] = f(double(j) / n, double(l) / n);
  }
  return v;
}

}  // namespace

TEST_CASE("transform round trip with and without twist") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  const int n = 12;
  for (double f1 : {0.0, 0.5}) {
    for (double f2 : {0.0, 0.5}) {
      std::vector<cplx> v(n * n);
      for (auto& z : v) z = cplx(g(rng), g(rng));
      const auto back = inverse_transform(forward_transform(v, n, f1, f2), n, f1, f2);
      for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(back[i] - v[i]) < 1e-13);
    }
  }
}

TEST_CASE("a twisted plane wave maps to a single coefficient") {
  const int n = 8;
  const double f1 = 0.5, f2 = 0.0;
  const int m = -2, k = 3;
  const auto v = sample(n, [&](double s, double t) {
    return std::exp(cplx(0.0, kTwoPi * ((m + f1) * s + (k + f2) * t)));
  });
  const auto c = forward_transform(v, n, f1, f2);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double expect = (frequency(a, n) == m && frequency(b, n) == k) ? 1.0 : 0.0;
      CHECK(std::abs(c[a * n + b] - expect) < 1e-13);
    }
  }
}

TEST_CASE("series evaluation matches the analytic band-limited function off grid") {
  const int n = 16;
  auto f = [](double s, double t) {
    return cplx(std::sin(kTwoPi * 2 * s) * std::cos(kTwoPi * t), std::cos(kTwoPi * 3 * t));
  };
  const auto c = forward_transform(sample(n, f), n);
  const double s = 0.1234, t = 0.777;
  const SeriesPoint p = evaluate_series(c, n, 0.0, 0.0, s, t);
  CHECK(std::abs(p.value - f(s, t)) < 1e-12);
  const cplx ds(kTwoPi * 2 * std::cos(kTwoPi * 2 * s) * std::cos(kTwoPi * t), 0.0);
  const cplx dt(-kTwoPi * std::sin(kTwoPi * 2 * s) * std::sin(kTwoPi * t),
                -kTwoPi * 3 * std::sin(kTwoPi * 3 * t));
  CHECK(std::abs(p.d_s - ds) < 1e-10);
  CHECK(std::abs(p.d_t - dt) < 1e-10);
}

TEST_CASE("twisted series change sign across the twisted generator") {
  const int n = 8;
  const auto v = sample(n, [](double s, double t) {
    return std::exp(cplx(0.0, kTwoPi * (0.5 * s + 1.0 * t)));
  });
  const auto c = forward_transform(v, n, 0.5, 0.0);
  const cplx a = evaluate_series(c, n, 0.5, 0.0, 0.3, 0.2).value;
  const cplx b = evaluate_series(c, n, 0.5, 0.0, 1.3, 0.2).value;
  const cplx d = evaluate_series(c, n, 0.5, 0.0, 0.3, 1.2).value;
  CHECK(std::abs(a + b) < 1e-12);
  CHECK(std::abs(a - d) < 1e-12);
}

TEST_CASE("spectral derivatives of periodic samples") {
  const int n = 16;
  const auto v = sample(n, [](double s, double t) { return cplx(std::sin(kTwoPi * 3 * s) * std::cos(kTwoPi * t), 0.0); });
  const auto ds = derivative_s(v, n);
  const auto dt = derivative_t(v, n);
  const auto es = sample(n, [](double s, double t) { return cplx(kTwoPi * 3 * std::cos(kTwoPi * 3 * s) * std::cos(kTwoPi * t), 0.0); });
  const auto et = sample(n, [](double s, double t) { return cplx(-kTwoPi * std::sin(kTwoPi * 3 * s) * std::sin(kTwoPi * t), 0.0); });
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(std::abs(ds[i] - es[i]) < 1e-11);
    CHECK(std::abs(dt[i] - et[i]) < 1e-11);
  }
}
