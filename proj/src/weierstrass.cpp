#include "spindirac/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "spindirac/dirac.hpp"
#include "spindirac/errors.hpp"

namespace spindirac {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross3(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

int floor_div(int a, int n) { return a >= 0 ? a / n : -((-a + n - 1) / n); }

// Real fields F_s, F_t (per component) from α: F_x = Re(a/√2), F_y = Im(a/√2).
struct LatticeDerivatives {
  std::array<std::vector<cplx>, 3> ds;
  std::array<std::vector<cplx>, 3> dt;
};

LatticeDerivatives lattice_derivatives(const OneFormField& alpha) {
  const Vec2 g1 = alpha.lattice.gamma1();
  const Vec2 g2 = alpha.lattice.gamma2();
  LatticeDerivatives out;
  for (int c = 0; c < 3; ++c) {
    const auto& a = alpha.coeff[c];
    out.ds[c].resize(a.size());
    out.dt[c].resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double fx = a[i].real() / kSqrt2;
      const double fy = a[i].imag() / kSqrt2;
      out.ds[c][i] = g1.x * fx + g1.y * fy;
      out.dt[c][i] = g2.x * fx + g2.y * fy;
    }
  }
  return out;
}

// Zero finding on a smooth vector-valued series; shared by spinor zeros and
// branch points.
struct Series {
  std::vector<cplx> coeffs;
  double f1 = 0.0;
  double f2 = 0.0;
};

struct FoundZero {
  double s = 0.0;
  double t = 0.0;
  int order = 0;
};

double series_abs(const std::vector<Series>& comps, int n, double s, double t) {
  double sum = 0.0;
  for (const auto& c : comps) sum += std::norm(evaluate_series(c.coeffs, n, c.f1, c.f2, s, t).value);
  return std::sqrt(sum);
}

double wrap01(double x) { return x - std::floor(x); }

double periodic_gap(double a, double b) {
  const double d = std::abs(wrap01(a) - wrap01(b));
  return std::min(d, 1.0 - d);
}

std::vector<FoundZero> find_zeros(const std::vector<Series>& comps, int n,
                                  const std::vector<double>& grid_abs, double zero_tol) {
  const double scale = *std::max_element(grid_abs.begin(), grid_abs.end());
  std::vector<FoundZero> found;
  if (!(scale > 0.0)) return found;
  auto at = [&](int j, int l) {
    return grid_abs[static_cast<std::size_t>(((j % n) + n) % n) * n + ((l % n) + n) % n];
  };
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      const double v = at(j, l);
      if (v > 0.25 * scale) continue;
      bool is_min = true;
      for (int dj = -1; dj <= 1 && is_min; ++dj) {
        for (int dl = -1; dl <= 1; ++dl) {
          if ((dj != 0 || dl != 0) && at(j + dj, l + dl) < v) {
            is_min = false;
            break;
          }
        }
      }
      if (!is_min) continue;

      // Gauss-Newton on Σ|f_c(s,t)|².
      double s = static_cast<double>(j) / n;
      double t = static_cast<double>(l) / n;
      for (int it = 0; it < 200; ++it) {
        double jss = 0.0, jst = 0.0, jtt = 0.0, gs = 0.0, gt = 0.0;
        for (const auto& c : comps) {
          const SeriesPoint p = evaluate_series(c.coeffs, n, c.f1, c.f2, s, t);
          for (int part = 0; part < 2; ++part) {
            const double r = part == 0 ? p.value.real() : p.value.imag();
            const double as = part == 0 ? p.d_s.real() : p.d_s.imag();
            const double at_ = part == 0 ? p.d_t.real() : p.d_t.imag();
            jss += as * as;
            jst += as * at_;
            jtt += at_ * at_;
            gs += as * r;
            gt += at_ * r;
          }
        }
        const double det = jss * jtt - jst * jst;
        if (!(std::abs(det) > 0.0)) break;
        const double ds = -(jtt * gs - jst * gt) / det;
        const double dt = -(jss * gt - jst * gs) / det;
        const double len = std::hypot(ds, dt);
        const double cap = 1.0 / n;  // stay near the candidate cell
        const double f = len > cap ? cap / len : 1.0;
        s += f * ds;
        t += f * dt;
        if (len < 1e-15) break;
      }
      const double value = series_abs(comps, n, s, t);
      if (!(value < zero_tol * scale)) continue;

      bool duplicate = false;
      for (const auto& z : found) {
        if (periodic_gap(z.s, s) < 1e-6 && periodic_gap(z.t, t) < 1e-6) duplicate = true;
      }
      if (duplicate) continue;

      // Vanishing order from the growth between two small circles.
      const double r0 = 0.25 / n;
      double inner_mean = 0.0, outer_mean = 0.0;
      constexpr int kSamples = 16;
      for (int k = 0; k < kSamples; ++k) {
        const double th = kTwoPi * k / kSamples;
        inner_mean += series_abs(comps, n, s + r0 * std::cos(th), t + r0 * std::sin(th));
        outer_mean += series_abs(comps, n, s + 2 * r0 * std::cos(th), t + 2 * r0 * std::sin(th));
      }
      const int order = static_cast<int>(std::lround(std::log2(outer_mean / inner_mean)));
      found.push_back({wrap01(s), wrap01(t), order});
    }
  }
  return found;
}

}  // namespace

OneFormField build_alpha(const SpinorField& phi) {
  OneFormField out{phi.lattice(), phi.n(), {}};
  for (auto& c : out.coeff) c.resize(phi.size());
  const cplx i_unit(0.0, 1.0);
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const cplx u = phi.plus()[k];
    const cplx vb = std::conj(phi.minus()[k]);
    out.coeff[0][k] = kSqrt2 * (u * u + vb * vb);
    out.coeff[1][k] = kSqrt2 * i_unit * (u * u - vb * vb);
    out.coeff[2][k] = 2.0 * kSqrt2 * i_unit * u * vb;
  }
  return out;
}

double closedness_residual(const OneFormField& alpha) {
  const LatticeDerivatives d = lattice_derivatives(alpha);
  const int n = alpha.n;
  const double area = alpha.lattice.area();
  double sum = 0.0;
  for (int c = 0; c < 3; ++c) {
    const auto dsdt = derivative_t(d.ds[c], n);
    const auto dtds = derivative_s(d.dt[c], n);
    for (std::size_t i = 0; i < dsdt.size(); ++i) {
      sum += std::norm((dtds[i] - dsdt[i]) / area);
    }
  }
  return std::sqrt(sum * area / (static_cast<double>(n) * n));
}

Vec3 Immersion::unwrapped(int j, int l) const {
  const int qj = floor_div(j, n);
  const int ql = floor_div(l, n);
  const Vec3& base = at(j - qj * n, l - ql * n);
  return base + static_cast<double>(qj) * period1 + static_cast<double>(ql) * period2;
}

Immersion integrate_immersion(const OneFormField& alpha, double target_h,
                              const IntegrationOptions& opts) {
  const double closed = closedness_residual(alpha);
  if (!(closed <= opts.tol_closed)) {
    std::ostringstream msg;
    msg << "refusing to integrate: closedness residual " << closed << " exceeds tolerance "
        << opts.tol_closed;
    throw ClosednessError(msg.str());
  }
  const int n = alpha.n;
  const LatticeDerivatives d = lattice_derivatives(alpha);
  Immersion imm{alpha.lattice, n, {}, {}, {}, 0.0, 0.0, {}};
  imm.mean_curvature = target_h;
  imm.closedness = closed;
  imm.points.assign(static_cast<std::size_t>(n) * n, Vec3{});

  for (int c = 0; c < 3; ++c) {
    const auto fs = forward_transform(d.ds[c], n);
    const auto ft = forward_transform(d.dt[c], n);
    imm.period1[c] = fs[0].real();
    imm.period2[c] = ft[0].real();
    std::vector<cplx> pc(fs.size());
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const double m = (2 * a == n) ? 0.0 : frequency(a, n);
        const double k = (2 * b == n) ? 0.0 : frequency(b, n);
        const double den = kTwoPi * (m * m + k * k);
        if (den == 0.0) continue;
        const std::size_t i = static_cast<std::size_t>(a) * n + b;
        // Least-squares antiderivative: ∂_s P = F_s, ∂_t P = F_t.
        pc[i] = cplx(0.0, -1.0) * (m * fs[i] + k * ft[i]) / den;
      }
    }
    const auto periodic = inverse_transform(pc, n);
    const double origin = periodic[0].real();
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        const std::size_t i = static_cast<std::size_t>(j) * n + l;
        imm.points[i][c] = imm.period1[c] * j / n + imm.period2[c] * l / n + periodic[i].real() - origin;
      }
    }
  }
  return imm;
}

ImmersionDerivatives immersion_derivatives(const Immersion& imm) {
  const int n = imm.n;
  const std::size_t nn = imm.points.size();
  ImmersionDerivatives out{std::vector<Vec3>(nn), std::vector<Vec3>(nn)};
  const Vec2 g1 = imm.lattice.gamma1();
  const Vec2 g2 = imm.lattice.gamma2();
  const double det = imm.lattice.area();
  for (int c = 0; c < 3; ++c) {
    std::vector<cplx> periodic(nn);
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        const std::size_t i = static_cast<std::size_t>(j) * n + l;
        periodic[i] = imm.points[i][c] - imm.period1[c] * j / n - imm.period2[c] * l / n;
      }
    }
    const auto ps = derivative_s(periodic, n);
    const auto pt = derivative_t(periodic, n);
    for (std::size_t i = 0; i < nn; ++i) {
      const double fs = imm.period1[c] + ps[i].real();
      const double ft = imm.period2[c] + pt[i].real();
      // [F_s; F_t] = [[g1.x, g1.y], [g2.x, g2.y]]·[F_x; F_y]
      out.dx[i][c] = (g2.y * fs - g1.y * ft) / det;
      out.dy[i][c] = (-g2.x * fs + g1.x * ft) / det;
    }
  }
  return out;
}

std::vector<double> discrete_mean_curvature(const Immersion& imm) {
  const int n = imm.n;
  const std::size_t nn = imm.points.size();
  std::vector<Vec3> lap(nn, Vec3{}), normal(nn, Vec3{});
  std::vector<double> area(nn, 0.0);
  auto id = [n](int j, int l) {
    return static_cast<std::size_t>(((j % n) + n) % n) * n + ((l % n) + n) % n;
  };
  auto add_triangle = [&](std::array<std::pair<int, int>, 3> v) {
    std::array<Vec3, 3> p;
    std::array<std::size_t, 3> idx;
    for (int k = 0; k < 3; ++k) {
      p[k] = imm.unwrapped(v[k].first, v[k].second);
      idx[k] = id(v[k].first, v[k].second);
    }
    const Vec3 fn = cross3(p[1] - p[0], p[2] - p[0]);
    const double a = 0.5 * norm3(fn);
    if (!(a > 0.0)) return;
    for (int k = 0; k < 3; ++k) {
      const int k1 = (k + 1) % 3, k2 = (k + 2) % 3;
      const Vec3 e1 = p[k1] - p[k];
      const Vec3 e2 = p[k2] - p[k];
      const double cot = dot3(e1, e2) / norm3(cross3(e1, e2));
      // Angle at k weighs the opposite edge (k1, k2).
      const Vec3 diff = p[k2] - p[k1];
      lap[idx[k1]] = lap[idx[k1]] + (0.5 * cot) * diff;
      lap[idx[k2]] = lap[idx[k2]] - (0.5 * cot) * diff;
      area[idx[k]] += a / 3.0;
      normal[idx[k]] = normal[idx[k]] + fn;
    }
  };
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      add_triangle({{{j, l}, {j + 1, l}, {j + 1, l + 1}}});
      add_triangle({{{j, l}, {j + 1, l + 1}, {j, l + 1}}});
    }
  }
  std::vector<double> h(nn, 0.0);
  for (std::size_t i = 0; i < nn; ++i) {
    const double nl = norm3(normal[i]);
    if (!(area[i] > 0.0) || !(nl > 0.0)) continue;
    h[i] = 0.5 * dot3((1.0 / area[i]) * lap[i], (1.0 / nl) * normal[i]);
  }
  return h;
}

double image_area(const Immersion& imm) {
  const ImmersionDerivatives d = immersion_derivatives(imm);
  double sum = 0.0;
  for (std::size_t i = 0; i < d.dx.size(); ++i) sum += norm3(cross3(d.dx[i], d.dy[i]));
  return sum * imm.lattice.area() / (static_cast<double>(imm.n) * imm.n);
}

std::vector<BranchPoint> find_branch_points(const Immersion& imm, double zero_tol) {
  const ImmersionDerivatives d = immersion_derivatives(imm);
  const int n = imm.n;
  std::vector<Series> comps;
  std::vector<double> grid_abs(d.dx.size(), 0.0);
  for (int c = 0; c < 3; ++c) {
    std::vector<cplx> fx(d.dx.size()), fy(d.dx.size());
    for (std::size_t i = 0; i < d.dx.size(); ++i) {
      fx[i] = d.dx[i][c];
      fy[i] = d.dy[i][c];
      grid_abs[i] += d.dx[i][c] * d.dx[i][c] + d.dy[i][c] * d.dy[i][c];
    }
    comps.push_back({forward_transform(fx, n), 0.0, 0.0});
    comps.push_back({forward_transform(fy, n), 0.0, 0.0});
  }
  for (auto& v : grid_abs) v = std::sqrt(0.5 * v);
  std::vector<BranchPoint> out;
  for (const auto& z : find_zeros(comps, n, grid_abs, zero_tol)) {
    out.push_back({imm.lattice.point(z.s, z.t), z.s, z.t, z.order});
  }
  return out;
}

bool CheckReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.pass; });
}

const CheckEntry* CheckReport::find(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

CheckReport verify_immersion(const Immersion& imm, const SpinorField& phi, double h,
                             const VerifyOptions& opts) {
  if (phi.n() != imm.n || !(phi.lattice() == imm.lattice)) {
    throw SizeError("immersion and spinor field live on different grids");
  }
  CheckReport rep;
  const ImmersionDerivatives d = immersion_derivatives(imm);

  double phi_max2 = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) phi_max2 = std::max(phi_max2, phi.norm2_at(i));
  double conf = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double target = phi.norm2_at(i);
    conf = std::max({conf, std::abs(norm3(d.dx[i]) - target), std::abs(norm3(d.dy[i]) - target)});
  }
  conf = phi_max2 > 0.0 ? conf / phi_max2 : conf;
  rep.entries.push_back({"conformality", conf, opts.tol_conformal, conf <= opts.tol_conformal});

  rep.branch_points = find_branch_points(imm, opts.zero_tol);
  int odd = 0;
  for (const auto& b : rep.branch_points) odd += (b.order % 2 != 0) ? 1 : 0;
  rep.entries.push_back({"branch_orders_even", static_cast<double>(odd), 0.0, odd == 0});

  // Mean curvature away from branch points.
  const std::vector<double> hv = discrete_mean_curvature(imm);
  std::vector<double> errs;
  const int n = imm.n;
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      bool near = false;
      for (const auto& b : rep.branch_points) {
        if (periodic_gap(b.s, static_cast<double>(j) / n) < 3.0 / n &&
            periodic_gap(b.t, static_cast<double>(l) / n) < 3.0 / n) {
          near = true;
        }
      }
      if (near) continue;
      const double e = std::abs(hv[static_cast<std::size_t>(j) * n + l] - h);
      errs.push_back(std::abs(h) > 1e-12 ? e / std::abs(h) : e);
    }
  }
  double median = 0.0;
  if (!errs.empty()) {
    auto mid = errs.begin() + static_cast<std::ptrdiff_t>(errs.size() / 2);
    std::nth_element(errs.begin(), mid, errs.end());
    median = *mid;
  }
  rep.entries.push_back({"cmc_median_err", median, opts.tol_cmc, median <= opts.tol_cmc});

  const Vec3 diag = imm.unwrapped(n, n) - imm.at(0, 0);
  const Vec3 sum = imm.period1 + imm.period2;
  const double add_err = norm3(diag - sum);
  rep.entries.push_back({"period_additivity", add_err, opts.tol_period, add_err <= opts.tol_period});

  const double area_err = std::abs(image_area(imm) - lp_integral(phi, 4.0));
  rep.entries.push_back({"image_area_vs_l4", area_err, opts.tol_area, area_err <= opts.tol_area});

  rep.entries.push_back({"closedness", imm.closedness, 1e-6, imm.closedness <= 1e-6});
  return rep;
}

ZeroCount count_zeros(const SpinorField& phi, double lambda, int genus, double zero_tol) {
  const SpinorModes modes = to_modes(phi);
  const int n = phi.n();
  std::vector<Series> comps{{modes.plus, phi.spin().frac1(), phi.spin().frac2()},
                            {modes.minus, phi.spin().frac1(), phi.spin().frac2()}};
  std::vector<double> grid_abs(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) grid_abs[i] = phi.abs_at(i);
  ZeroCount out;
  for (const auto& z : find_zeros(comps, n, grid_abs, zero_tol)) {
    if (z.order <= 0) continue;
    out.zeros.push_back({phi.lattice().point(z.s, z.t), z.s, z.t, z.order});
  }
  out.bound = genus - 1 + lambda * lambda / (4.0 * std::numbers::pi);
  out.ok = static_cast<double>(out.zeros.size()) <= out.bound;
  return out;
}

std::filesystem::path export_mesh(const Immersion& imm, int k1, int k2,
                                  const std::filesystem::path& path,
                                  const CheckReport* diagnostics, double lambda) {
  if (k1 < 1 || k2 < 1) throw DomainError("tiling counts must be >= 1");
  const int n = imm.n;
  const int rows = k1 * n + 1;
  const int cols = k2 * n + 1;
  std::ofstream obj(path);
  if (!obj) throw Error("cannot open mesh file for writing: " + path.string());
  obj.precision(17);
  obj << "# periodic branched conformal immersion, " << k1 << "x" << k2 << " fundamental domains\n";
  for (int j = 0; j < rows; ++j) {
    for (int l = 0; l < cols; ++l) {
      const Vec3 p = imm.unwrapped(j, l);
      obj << "v " << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
    }
  }
  auto vid = [cols](int j, int l) { return static_cast<long>(j) * cols + l + 1; };
  for (int j = 0; j + 1 < rows; ++j) {
    for (int l = 0; l + 1 < cols; ++l) {
      obj << "f " << vid(j, l) << ' ' << vid(j + 1, l) << ' ' << vid(j + 1, l + 1) << '\n';
      obj << "f " << vid(j, l) << ' ' << vid(j + 1, l + 1) << ' ' << vid(j, l + 1) << '\n';
    }
  }
  if (!obj) throw Error("failed writing mesh file: " + path.string());

  nlohmann::ordered_json side;
  side["schema_version"] = 1;
  side["periods"] = {{imm.period1[0], imm.period1[1], imm.period1[2]},
                     {imm.period2[0], imm.period2[1], imm.period2[2]}};
  side["H"] = imm.mean_curvature;
  side["lambda"] = lambda;
  side["copies"] = {k1, k2};
  side["n"] = n;
  nlohmann::ordered_json diag;
  diag["closedness"] = imm.closedness;
  if (diagnostics != nullptr) {
    for (const char* key : {"conformality", "cmc_median_err"}) {
      if (const CheckEntry* e = diagnostics->find(key)) diag[key] = e->value;
    }
  }
  side["diagnostics"] = diag;
  nlohmann::ordered_json bps = nlohmann::ordered_json::array();
  const auto& list = diagnostics != nullptr ? diagnostics->branch_points : imm.branch_points;
  for (const auto& b : list) bps.push_back({{"u", b.s}, {"v", b.t}, {"order", b.order}});
  side["branch_points"] = bps;

  std::filesystem::path side_path = path;
  side_path.replace_extension(".json");
  std::ofstream js(side_path);
  if (!js) throw Error("cannot open sidecar for writing: " + side_path.string());
  js << side.dump(2) << '\n';
  return side_path;
}

ObjMesh read_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh file: " + path.string());
  ObjMesh mesh;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      Vec3 v{};
      ls >> v[0] >> v[1] >> v[2];
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::array<int, 3> f{};
      ls >> f[0] >> f[1] >> f[2];
      for (auto& x : f) --x;
      mesh.faces.push_back(f);
    }
  }
  return mesh;
}

}  // namespace spindirac
