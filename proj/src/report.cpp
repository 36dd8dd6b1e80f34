#include "spindirac/report.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spindirac/dirac.hpp"

namespace spindirac {

namespace {

Json header(const char* command, const RunConfig& cfg) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["seed"] = cfg.seed;
  j["config"] = cfg.to_json();
  return j;
}

Json spectrum_summary(const Lattice& lat, const SpinStructure& spin) {
  Json j;
  const auto groups = closed_form_spectrum(lat, spin, 16);
  Json cf = Json::array();
  int kernel = 0;
  for (const auto& g : groups) {
    cf.push_back({{"value", g.value}, {"multiplicity", g.multiplicity}});
    if (g.value == 0.0) kernel = g.multiplicity;
  }
  const double l1 = first_positive_eigenvalue(lat, spin);
  j["closed_form"] = cf;
  j["kernel_dimension"] = kernel;
  j["lambda1"] = l1;
  j["lambda1_sqrt_area"] = l1 * std::sqrt(lat.area());
  return j;
}

// Dense spectrum against the closed form on all eigenvalues below the first
// unresolved mode.
Json numeric_comparison(const Lattice& lat, const SpinStructure& spin, int n) {
  const DualModeSet modes(lat, spin);
  double cutoff = std::numeric_limits<double>::infinity();
  const int q = n / 4;
  for (int m = -n; m <= n; ++m) {
    for (int k = -n; k <= n; ++k) {
      const DualMode d = modes.mode(m, k);
      if (std::max(std::abs(d.pairing1()), std::abs(d.pairing2())) >= q) {
        cutoff = std::min(cutoff, 2.0 * std::numbers::pi * norm(d.xi));
      }
    }
  }
  std::vector<double> numeric;
  for (double v : dirac_eigenvalues_numeric(lat, spin, n)) {
    if (std::abs(v) < cutoff * (1.0 - 1e-9)) numeric.push_back(std::abs(v));
  }
  std::vector<double> exact;
  for (const auto& d : modes.modes_within(cutoff / (2.0 * std::numbers::pi))) {
    const double v = 2.0 * std::numbers::pi * norm(d.xi);
    if (v >= cutoff * (1.0 - 1e-9)) continue;
    exact.push_back(v);
    exact.push_back(v);  // ±, or the two kernel directions at ξ = 0
  }
  std::sort(numeric.begin(), numeric.end());
  std::sort(exact.begin(), exact.end());
  double err = numeric.size() == exact.size() ? 0.0 : std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < std::min(numeric.size(), exact.size()); ++i) {
    const double scale = std::max(exact[i], 1.0);
    err = std::max(err, std::abs(numeric[i] - exact[i]) / scale);
  }
  Json j;
  j["n"] = n;
  j["cutoff"] = cutoff;
  j["compared"] = numeric.size();
  j["max_rel_error"] = tagged(std::isfinite(err) ? err : -1.0, 1e-8, err < 1e-8);
  return j;
}

Json solution_summary(const Solution& sol, const RunConfig& cfg) {
  Json j;
  j["p"] = sol.p;
  j["lambda"] = sol.lambda;
  j["residual"] = tagged(sol.residual, cfg.tol_solve_value(), sol.residual <= cfg.tol_solve_value());
  const double nerr = std::abs(sol.norm_p - 1.0);
  j["norm_p_error"] = tagged(nerr, 10 * cfg.tol_norm, nerr <= 10 * cfg.tol_norm);
  j["min_abs"] = min_abs(sol.phi);
  j["max_abs"] = max_abs(sol.phi);
  j["lambda_consistency"] = lambda_consistency(sol.phi, sol.p);
  return j;
}

Json zeros_summary(const Solution& sol, const RunConfig& cfg) {
  const ZeroCount zc = count_zeros(sol.phi, sol.lambda, 1, cfg.zero_tol);
  Json list = Json::array();
  for (const auto& z : zc.zeros) list.push_back({{"u", z.s}, {"v", z.t}, {"order", z.order}});
  Json j;
  j["count"] = tagged(static_cast<double>(zc.zeros.size()), zc.bound, zc.ok);
  j["zeros"] = list;
  return j;
}

Json trace_json(const std::vector<TraceEntry>& trace) {
  Json out = Json::array();
  for (const auto& t : trace) {
    out.push_back({{"p", t.p},
                   {"lambda", t.lambda},
                   {"sup_norm", t.sup_norm},
                   {"residual", t.residual},
                   {"newton_iterations", t.newton_iterations}});
  }
  return out;
}

Solution load_critical(const std::filesystem::path& path) {
  Solution sol = load_solution(path);
  if (!(max_abs(sol.phi) > 0.0)) throw DegenerateInputError(path.string() + ": spinor field is zero");
  if (std::abs(sol.p - 4.0) > 1e-12) {
    throw ValidationError("p", path.string() + ": Weierstrass data needs a p = 4 solution");
  }
  return sol;
}

Json surface_report(const Solution& sol, const RunConfig& cfg, const std::filesystem::path* obj) {
  const OneFormField alpha = build_alpha(sol.phi);
  Immersion imm = integrate_immersion(alpha, sol.lambda, {cfg.tol_closed});
  VerifyOptions vo;
  vo.tol_conformal = std::max(cfg.tol_conformal, 10.0 * sol.residual);
  vo.tol_cmc = cfg.tol_cmc;
  vo.zero_tol = cfg.zero_tol;
  const CheckReport rep = verify_immersion(imm, sol.phi, sol.lambda, vo);
  imm.branch_points = rep.branch_points;

  auto vec = [](const Vec3& v) { return Json{v[0], v[1], v[2]}; };
  auto len = [](const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); };
  Json j;
  j["H"] = sol.lambda;
  j["periods"] = {vec(imm.period1), vec(imm.period2)};
  j["period_norms"] = {len(imm.period1), len(imm.period2)};
  j["image_area"] = image_area(imm);
  Json diag;
  for (const auto& e : rep.entries) diag[e.name] = tagged(e.value, e.tolerance, e.pass);
  j["diagnostics"] = diag;
  Json bps = Json::array();
  for (const auto& b : rep.branch_points) bps.push_back({{"u", b.s}, {"v", b.t}, {"order", b.order}});
  j["branch_points"] = bps;
  if (obj != nullptr) {
    const auto side = export_mesh(imm, cfg.copies1, cfg.copies2, *obj, &rep, sol.lambda);
    j["files"] = {{"mesh", obj->string()}, {"sidecar", side.string()}};
  }
  return j;
}

bool any_failed(const Json& j) {
  if (j.is_object()) {
    if (j.contains("pass") && j["pass"].is_boolean() && !j["pass"].get<bool>()) return true;
    for (const auto& [k, v] : j.items()) {
      if (any_failed(v)) return true;
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (any_failed(v)) return true;
    }
  }
  return false;
}

}  // namespace

Json tagged(double value, double tol, bool pass) {
  Json j;
  j["value"] = value;
  j["tol"] = tol;
  j["pass"] = pass;
  return j;
}

std::string threshold_verdict(double lambda_sqrt_area) {
  return below_sphere_threshold(lambda_sqrt_area) ? kVerdictBelow : kVerdictFails;
}

Json threshold_entry(double lambda_sqrt_area) {
  Json j;
  j["lambda_sqrt_area"] = lambda_sqrt_area;
  j["sphere_value"] = sphere_lambda_min(2);
  j["below"] = below_sphere_threshold(lambda_sqrt_area);
  j["verdict"] = threshold_verdict(lambda_sqrt_area);
  return j;
}

Json conformal_factor_summary(const SpinorField& phi) {
  std::vector<double> values(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) values[i] = phi.norm2_at(i) * phi.norm2_at(i);
  Json j;
  j["exponent"] = 4;
  j["min"] = *std::min_element(values.begin(), values.end());
  j["max"] = *std::max_element(values.begin(), values.end());
  j["volume"] = lp_integral(phi, 4.0);
  j["n_grid"] = phi.n();
  j["values"] = values;
  return j;
}

Json cmd_spectrum(const RunConfig& cfg) {
  cfg.validate();
  const Lattice lat = cfg.lattice();
  Json j = header("spectrum", cfg);
  j["area"] = lat.area();
  Json summary = spectrum_summary(lat, cfg.spin());
  summary["numeric"] = numeric_comparison(lat, cfg.spin(), std::min(cfg.n, 12));
  j["spectrum"] = summary;
  j["threshold"] = threshold_entry(summary["lambda1_sqrt_area"].get<double>());
  return j;
}

Json cmd_mu_curve(const RunConfig& cfg) {
  cfg.validate();
  const Lattice lat = cfg.lattice();
  MuCurveOptions opts;
  opts.n = cfg.mu_grid;
  opts.seed = cfg.seed;
  opts.perturbation = cfg.perturbation;
  opts.ascent.tol_grad = cfg.tol_grad_value();
  opts.ascent.max_iter = cfg.max_iter;
  const auto rows = mu_curve(lat, cfg.spin(), cfg.q_values, opts);

  Json j = header("mu-curve", cfg);
  Json table = Json::array();
  double worst_increase = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    Json row;
    row["q"] = r.q;
    row["mu"] = r.mu;
    row["grad_norm"] = tagged(r.grad_norm, opts.ascent.tol_grad, r.converged);
    row["iterations"] = r.iterations;
    if (!r.error.empty()) row["error"] = r.error;
    table.push_back(row);
    if (i > 0) worst_increase = std::max(worst_increase, r.mu - rows[i - 1].mu);
  }
  j["mu_curve"] = table;
  const double tol = 2.0 * opts.ascent.tol_grad;
  j["monotone_nonincreasing"] = tagged(worst_increase, tol, worst_increase <= tol);
  // On the area-1 representative μ₂ = 1/λ₁⁺.
  const Lattice unit = lat.scaled(1.0 / std::sqrt(lat.area()));
  const double dual = 1.0 / first_positive_eigenvalue(unit, cfg.spin());
  j["mu2_closed_form"] = dual;
  if (!rows.empty() && std::abs(rows.back().q - 2.0) < 1e-12) {
    const double err = std::abs(rows.back().mu - dual);
    j["mu2_duality"] = tagged(err, 1e-6, err <= 1e-6);
  }
  j["lambda_min_upper_bound"] = rows.empty() ? 0.0 : 1.0 / rows.front().mu;
  return j;
}

Json cmd_solve(const RunConfig& cfg, const std::optional<std::filesystem::path>& resume) {
  cfg.validate();
  Solution sol{SpinorField(cfg.lattice(), cfg.spin(), cfg.n), 0.0, 2.0, 0.0, 0.0, 0.0};
  std::vector<TraceEntry> trace;
  if (resume) {
    const Solution start = load_solution(*resume);
    ExponentSolve r = solve_at_exponent(4.0, start.phi, cfg.continuation().newton);
    trace.push_back({4.0, r.solution.lambda, max_abs(r.solution.phi), r.solution.residual,
                     r.newton_iterations});
    sol = std::move(r.solution);
  } else {
    CriticalSolve r = solve_critical(cfg.lattice(), cfg.spin(), cfg.n, cfg.continuation());
    sol = std::move(r.solution);
    trace = std::move(r.trace);
  }
  const std::filesystem::path out = std::filesystem::path(cfg.out_dir) / "solution.json";
  save_solution(sol, out, trace);

  Json j = header("solve", cfg);
  if (resume) j["resumed_from"] = resume->string();
  j["solution"] = solution_summary(sol, cfg);
  j["trace"] = trace_json(trace);
  j["conformal_factor"] = conformal_factor_summary(sol.phi);
  j["zeros"] = zeros_summary(sol, cfg);
  j["threshold"] = threshold_entry(sol.lambda);
  j["files"] = {{"solution", out.string()}};
  return j;
}

Json cmd_surface(const RunConfig& cfg, const std::filesystem::path& solution, bool verify_only) {
  cfg.validate();
  const Solution sol = load_critical(solution);
  Json j = header("surface", cfg);
  j["solution"] = solution.string();
  j["verify_only"] = verify_only;
  const std::filesystem::path obj = std::filesystem::path(cfg.out_dir) / "surface.obj";
  if (!verify_only) std::filesystem::create_directories(cfg.out_dir);
  j["surface"] = surface_report(sol, cfg, verify_only ? nullptr : &obj);
  j["threshold"] = threshold_entry(sol.lambda);
  return j;
}

Json cmd_check(const RunConfig& cfg, const std::optional<std::filesystem::path>& solution) {
  cfg.validate();
  Json j = header("check", cfg);
  const double sphere = sphere_lambda_min(2);
  const double sphere_err = std::abs(sphere - 2.0 * std::sqrt(std::numbers::pi));
  j["sphere_constant"] = tagged(sphere_err, 1e-12, sphere_err <= 1e-12);
  if (!solution) {
    const Lattice lat = cfg.lattice();
    j["spectrum"] = numeric_comparison(lat, cfg.spin(), std::min(cfg.n, 12));
    j["threshold"] = threshold_entry(first_positive_eigenvalue(lat, cfg.spin()) * std::sqrt(lat.area()));
    return j;
  }
  const Solution sol = load_solution(*solution);
  if (!(max_abs(sol.phi) > 0.0)) throw DegenerateInputError(solution->string() + ": spinor field is zero");
  Solution fresh = sol;
  fresh.residual = l2_norm(residual_field(sol.phi, sol.lambda, sol.p));
  fresh.norm_p = lp_norm(sol.phi, sol.p);
  j["solution"] = solution_summary(fresh, cfg);
  j["zeros"] = zeros_summary(fresh, cfg);
  j["threshold"] = threshold_entry(sol.lambda);
  if (std::abs(sol.p - 4.0) < 1e-12) j["surface"] = surface_report(fresh, cfg, nullptr);
  return j;
}

bool report_passes(const Json& report) { return !any_failed(report); }

}  // namespace spindirac
