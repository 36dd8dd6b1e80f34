#include "spindirac/dirac.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <numbers>

#include "spindirac/errors.hpp"

namespace spindirac {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kDenseMaxGrid = 24;

}  // namespace

SpinorModes to_modes(const SpinorField& phi) {
  const double f1 = phi.spin().frac1();
  const double f2 = phi.spin().frac2();
  return {forward_transform(phi.plus(), phi.n(), f1, f2),
          forward_transform(phi.minus(), phi.n(), f1, f2)};
}

SpinorField from_modes(const Lattice& lat, const SpinStructure& spin, int n,
                       const SpinorModes& modes) {
  return SpinorField(lat, spin, n, inverse_transform(modes.plus, n, spin.frac1(), spin.frac2()),
                     inverse_transform(modes.minus, n, spin.frac1(), spin.frac2()));
}

Vec2 grid_mode(const Lattice& lat, const SpinStructure& spin, int n, int a, int b) {
  const double p1 = frequency(a, n) + spin.frac1();
  const double p2 = frequency(b, n) + spin.frac2();
  return p1 * lat.dual1() + p2 * lat.dual2();
}

SpinorField apply_dirac(const SpinorField& phi) {
  const int n = phi.n();
  SpinorModes c = to_modes(phi);
  SpinorModes out{std::vector<cplx>(c.plus.size()), std::vector<cplx>(c.plus.size())};
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Vec2 xi = grid_mode(phi.lattice(), phi.spin(), n, a, b);
      const cplx w(kTwoPi * xi.x, kTwoPi * xi.y);
      const std::size_t i = phi.index(a, b);
      out.plus[i] = w * c.minus[i];
      out.minus[i] = std::conj(w) * c.plus[i];
    }
  }
  return from_modes(phi.lattice(), phi.spin(), n, out);
}

SpinorField apply_inverse_dirac_squared(const SpinorField& phi) {
  const int n = phi.n();
  SpinorModes c = to_modes(phi);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Vec2 xi = grid_mode(phi.lattice(), phi.spin(), n, a, b);
      const double lam2 = kTwoPi * kTwoPi * dot(xi, xi);
      const std::size_t i = phi.index(a, b);
      const double f = lam2 > 0.0 ? 1.0 / lam2 : 0.0;
      c.plus[i] *= f;
      c.minus[i] *= f;
    }
  }
  return from_modes(phi.lattice(), phi.spin(), n, c);
}

SpinorField project_out_kernel(const SpinorField& phi) {
  if (!phi.spin().trivial()) return phi;
  // The only kernel mode is ξ = 0, i.e. the constant spinors.
  SpinorField out = phi;
  cplx mean_plus{}, mean_minus{};
  for (std::size_t i = 0; i < phi.size(); ++i) {
    mean_plus += phi.plus()[i];
    mean_minus += phi.minus()[i];
  }
  mean_plus /= static_cast<double>(phi.size());
  mean_minus /= static_cast<double>(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    out.plus()[i] -= mean_plus;
    out.minus()[i] -= mean_minus;
  }
  return out;
}

cplx inner(const SpinorField& a, const SpinorField& b) {
  if (!a.compatible(b)) throw SizeError("spinor fields live on different grids");
  cplx sum{};
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += std::conj(a.plus()[i]) * b.plus()[i] + std::conj(a.minus()[i]) * b.minus()[i];
  }
  return sum * a.cell_area();
}

double l2_norm(const SpinorField& phi) { return std::sqrt(std::real(inner(phi, phi))); }

double lp_integral(const SpinorField& phi, double p) {
  if (!(p >= 1.0)) throw DomainError("L^p exponent must be >= 1");
  double sum = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) sum += std::pow(phi.norm2_at(i), 0.5 * p);
  return sum * phi.cell_area();
}

double lp_norm(const SpinorField& phi, double p) { return std::pow(lp_integral(phi, p), 1.0 / p); }

double max_abs(const SpinorField& phi) {
  double m = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) m = std::max(m, phi.norm2_at(i));
  return std::sqrt(m);
}

double min_abs(const SpinorField& phi) {
  double m = phi.norm2_at(0);
  for (std::size_t i = 0; i < phi.size(); ++i) m = std::min(m, phi.norm2_at(i));
  return std::sqrt(m);
}

SpinorField pointwise_power(const SpinorField& phi, double e) {
  SpinorField out = phi;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double r2 = phi.norm2_at(i);
    const double f = r2 > 0.0 ? std::pow(r2, 0.5 * e) : 0.0;
    out.plus()[i] *= f;
    out.minus()[i] *= f;
  }
  return out;
}

SpinorField mode_eigenspinor(const Lattice& lat, const SpinStructure& spin, int n,
                             std::int64_t m, std::int64_t k, int sign) {
  const DualModeSet modes(lat, spin);
  const DualMode md = modes.mode(m, k);
  const cplx w(md.xi.x, md.xi.y);
  const double r = std::abs(w);
  cplx v_plus(1.0, 0.0), v_minus(0.0, 0.0);
  if (r > 0.0) {
    v_plus = 1.0 / std::sqrt(2.0);
    v_minus = static_cast<double>(sign) * std::conj(w) / r / std::sqrt(2.0);
  }
  SpinorField out(lat, spin, n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      const double phase =
          kTwoPi * (md.pairing1() * j / static_cast<double>(n) + md.pairing2() * l / static_cast<double>(n));
      const cplx e = std::polar(1.0, phase);
      out.plus()[out.index(j, l)] = e * v_plus;
      out.minus()[out.index(j, l)] = e * v_minus;
    }
  }
  out *= cplx(1.0 / std::sqrt(lat.area()), 0.0);
  return out;
}

SpinorField first_positive_eigenspinor(const Lattice& lat, const SpinStructure& spin, int n) {
  const DualModeSet modes(lat, spin);
  double radius = 1.0 / std::sqrt(lat.area());
  for (;;) {
    for (const auto& md : modes.modes_within(radius)) {
      if (norm(md.xi) > 0.0) {
        const std::int64_t m = (md.twice1 - (spin.eps1 == 1 ? 0 : 1)) / 2;
        const std::int64_t k = (md.twice2 - (spin.eps2 == 1 ? 0 : 1)) / 2;
        return mode_eigenspinor(lat, spin, n, m, k, +1);
      }
    }
    radius *= 2.0;
  }
}

SpinorField random_band_limited(const Lattice& lat, const SpinStructure& spin, int n,
                                int max_freq, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpinorModes c{std::vector<cplx>(static_cast<std::size_t>(n) * n),
                std::vector<cplx>(static_cast<std::size_t>(n) * n)};
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (std::abs(frequency(a, n)) > max_freq || std::abs(frequency(b, n)) > max_freq) continue;
      if (2 * a == n || 2 * b == n) continue;
      const Vec2 xi = grid_mode(lat, spin, n, a, b);
      const double amp = 1.0 / (1.0 + dot(xi, xi));
      const std::size_t i = static_cast<std::size_t>(a) * n + b;
      const double r1 = gauss(rng), r2 = gauss(rng), r3 = gauss(rng), r4 = gauss(rng);
      c.plus[i] = amp * cplx(r1, r2);
      c.minus[i] = amp * cplx(r3, r4);
    }
  }
  SpinorField out = from_modes(lat, spin, n, c);
  const double nrm = l2_norm(out);
  if (nrm > 0.0) out *= cplx(1.0 / nrm, 0.0);
  return out;
}

namespace {

Eigen::MatrixXcd dense_dirac_matrix(const Lattice& lat, const SpinStructure& spin, int n) {
  const auto nn = static_cast<Eigen::Index>(n) * n;
  Eigen::MatrixXcd mat(2 * nn, 2 * nn);
  SpinorField unit(lat, spin, n);
  for (Eigen::Index col = 0; col < 2 * nn; ++col) {
    std::fill(unit.plus().begin(), unit.plus().end(), cplx{});
    std::fill(unit.minus().begin(), unit.minus().end(), cplx{});
    if (col < nn) {
      unit.plus()[col] = 1.0;
    } else {
      unit.minus()[col - nn] = 1.0;
    }
    const SpinorField d = apply_dirac(unit);
    for (Eigen::Index row = 0; row < nn; ++row) {
      mat(row, col) = d.plus()[row];
      mat(nn + row, col) = d.minus()[row];
    }
  }
  // Hermitian up to round-off; symmetrize before the solver.
  return 0.5 * (mat + mat.adjoint());
}

void check_dense_size(int n) {
  if (n > kDenseMaxGrid) throw SizeError("dense Dirac spectrum is limited to n <= 24");
}

}  // namespace

std::vector<double> dirac_eigenvalues_numeric(const Lattice& lat, const SpinStructure& spin,
                                              int n) {
  check_dense_size(n);
  SpinorField probe(lat, spin, n);  // validates n
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense_dirac_matrix(lat, spin, n),
                                                         Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<EigenPair> dirac_spectrum_numeric(const Lattice& lat, const SpinStructure& spin, int n,
                                              int k) {
  check_dense_size(n);
  SpinorField probe(lat, spin, n);
  const auto nn = static_cast<Eigen::Index>(n) * n;
  if (k < 1 || k > 2 * nn) throw SizeError("requested eigenpair count exceeds 2n^2");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense_dirac_matrix(lat, spin, n));
  const Eigen::VectorXd& ev = solver.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index i = 0; i < ev.size(); ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    // |value| quantized so that ± pairs equal up to round-off tie.
    const double qa = std::round(std::abs(ev[a]) * 1e9);
    const double qb = std::round(std::abs(ev[b]) * 1e9);
    if (qa != qb) return qa < qb;
    return ev[a] < ev[b];
  });
  std::vector<EigenPair> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const Eigen::Index idx = order[static_cast<std::size_t>(i)];
    const Eigen::VectorXcd vec = solver.eigenvectors().col(idx);
    SpinorField f(lat, spin, n);
    for (Eigen::Index r = 0; r < nn; ++r) {
      f.plus()[r] = vec[r];
      f.minus()[r] = vec[nn + r];
    }
    f *= cplx(1.0 / l2_norm(f), 0.0);
    out.push_back({ev[idx], std::move(f)});
  }
  return out;
}

}  // namespace spindirac
