#include "spindirac/variational.hpp"

#include <algorithm>
#include <random>

#include "spindirac/dirac.hpp"

namespace spindirac {

namespace {

void check_q(double q) {
  if (!(q >= kCriticalQ - 1e-12 && q <= 2.0 + 1e-12)) {
    throw DomainError("functional exponent q must lie in [4/3, 2]");
  }
}

FunctionalState evaluate_with(const SpinorField& phi, const SpinorField& dphi, double q) {
  FunctionalState st;
  st.q = q;
  const cplx num = inner(dphi, phi);
  st.numerator = num.real();
  st.numerator_imag = num.imag();
  st.dphi_q_norm = lp_norm(dphi, q);
  if (!(st.dphi_q_norm > kDegenerateTol)) {
    throw DegenerateInputError("D(phi) vanishes: F_q is undefined on ker D");
  }
  st.value = st.numerator / (st.dphi_q_norm * st.dphi_q_norm);
  st.rho = st.value * std::pow(st.dphi_q_norm, 2.0 - q);
  return st;
}

SpinorField gradient_with(const SpinorField& phi, const SpinorField& dphi,
                          const FunctionalState& st) {
  SpinorField inner_field = phi;
  inner_field.axpy(-st.rho, pointwise_power(dphi, st.q - 2.0));
  SpinorField g = apply_dirac(inner_field);
  g *= cplx(2.0 / (st.dphi_q_norm * st.dphi_q_norm), 0.0);
  return g;
}

// Scales φ so that ‖Dφ‖_q = 1.
void normalize_dirac_norm(SpinorField& phi, double q) {
  const double s = lp_norm(apply_dirac(phi), q);
  if (!(s > kDegenerateTol)) throw DegenerateInputError("D(phi) vanishes during ascent");
  phi *= cplx(1.0 / s, 0.0);
}

}  // namespace

FunctionalState evaluate_functional(const SpinorField& phi, double q) {
  check_q(q);
  return evaluate_with(phi, apply_dirac(phi), q);
}

double functional_Fq(const SpinorField& phi, double q) { return evaluate_functional(phi, q).value; }

SpinorField grad_Fq(const SpinorField& phi, double q) {
  check_q(q);
  const SpinorField dphi = apply_dirac(phi);
  const FunctionalState st = evaluate_with(phi, dphi, q);
  return gradient_with(phi, dphi, st);
}

AscentResult maximize_Fq(const SpinorField& init, double q, const AscentOptions& opts) {
  check_q(q);
  if (!(q > kCriticalQ)) throw DomainError("maximize_Fq requires q in (4/3, 2]");
  const double tol_grad = opts.tol_grad > 0.0 ? opts.tol_grad : 1e-8 * init.n();

  AscentResult cur{project_out_kernel(init), 0.0, 0.0, 0, false};
  normalize_dirac_norm(cur.phi, q);

  SpinorField dphi = apply_dirac(cur.phi);
  FunctionalState st = evaluate_with(cur.phi, dphi, q);
  SpinorField grad = gradient_with(cur.phi, dphi, st);
  cur.mu = st.value;
  cur.grad_norm = l2_norm(grad);

  double step = opts.initial_step;
  for (int it = 0; it < opts.max_iter; ++it) {
    cur.iterations = it;
    if (cur.grad_norm < tol_grad) {
      cur.converged = true;
      return cur;
    }
    const SpinorField dir = apply_inverse_dirac_squared(grad);
    const double slope = inner(grad, dir).real();
    if (!(slope > 0.0)) break;

    bool accepted = false;
    while (step >= opts.min_step) {
      SpinorField trial = cur.phi;
      trial.axpy(step, dir);
      trial = project_out_kernel(trial);
      const SpinorField dtrial = apply_dirac(trial);
      FunctionalState tst;
      try {
        tst = evaluate_with(trial, dtrial, q);
      } catch (const DegenerateInputError&) {
        step *= opts.backtrack;
        continue;
      }
      if (tst.value >= st.value + opts.armijo * step * slope) {
        // F_q is degree-0 homogeneous, so renormalizing keeps the value.
        const double s = 1.0 / tst.dphi_q_norm;
        trial *= cplx(s, 0.0);
        cur.phi = std::move(trial);
        dphi = apply_dirac(cur.phi);
        st = evaluate_with(cur.phi, dphi, q);
        grad = gradient_with(cur.phi, dphi, st);
        cur.mu = st.value;
        cur.grad_norm = l2_norm(grad);
        accepted = true;
        step = std::min(step * 2.0, 1e6);
        break;
      }
      step *= opts.backtrack;
    }
    if (!accepted) break;
  }
  cur.iterations = std::max(cur.iterations, 0);
  if (cur.grad_norm < tol_grad) {
    cur.converged = true;
    return cur;
  }
  throw IterationLimitError("F_q ascent stopped with gradient norm " +
                                std::to_string(cur.grad_norm) + " above tolerance " +
                                std::to_string(tol_grad),
                            cur);
}

SpinorField perturbed_eigenspinor(const Lattice& lat, const SpinStructure& spin, int n,
                                  double amplitude, unsigned long long seed) {
  SpinorField phi = first_positive_eigenspinor(lat, spin, n);
  if (amplitude > 0.0) {
    std::mt19937_64 rng(seed);
    const SpinorField noise = random_band_limited(lat, spin, n, std::max(1, n / 4), rng);
    phi.axpy(amplitude * l2_norm(phi), noise);
  }
  return phi;
}

Solution normalize_euler_lagrange(const SpinorField& phi_max, double q, double mu) {
  check_q(q);
  if (!(mu > 0.0)) throw DomainError("mu_q must be positive");
  const double p = conjugate_exponent(q);
  const SpinorField dphi = apply_dirac(phi_max);

  // φ = μ⁻¹φ₂ = |Dφ_max|^{q-2}Dφ_max.
  SpinorField phi = pointwise_power(dphi, q - 2.0);
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < dphi.size(); ++i) {
    if (dphi.norm2_at(i) == 0.0) ++zeros;
  }
  const double np = lp_norm(phi, p);
  if (!(np > 0.0)) throw DegenerateInputError("Euler-Lagrange normalization of a zero field");
  phi *= cplx(1.0 / np, 0.0);

  Solution sol{phi, 1.0 / mu, p, 0.0, 0.0, static_cast<double>(zeros) / dphi.size()};
  SpinorField res = apply_dirac(sol.phi);
  res.axpy(-sol.lambda, pointwise_power(sol.phi, p - 2.0));
  sol.residual = l2_norm(res);
  sol.norm_p = lp_norm(sol.phi, p);
  return sol;
}

std::vector<MuCurveRow> mu_curve(const Lattice& lat, const SpinStructure& spin,
                                 const std::vector<double>& q_values,
                                 const MuCurveOptions& opts) {
  for (double q : q_values) {
    if (!(q > kCriticalQ && q <= 2.0)) throw DomainError("mu_curve exponents must lie in (4/3, 2]");
  }
  const Lattice unit = lat.scaled(1.0 / std::sqrt(lat.area()));
  std::vector<double> order = q_values;
  std::sort(order.begin(), order.end(), std::greater<>());

  SpinorField warm = perturbed_eigenspinor(unit, spin, opts.n, opts.perturbation, opts.seed);
  std::vector<MuCurveRow> rows;
  for (double q : order) {
    MuCurveRow row;
    row.q = q;
    try {
      AscentResult r = maximize_Fq(warm, q, opts.ascent);
      row.mu = r.mu;
      row.grad_norm = r.grad_norm;
      row.iterations = r.iterations;
      row.converged = true;
      warm = std::move(r.phi);
    } catch (const IterationLimitError& e) {
      row.mu = e.best().mu;
      row.grad_norm = e.best().grad_norm;
      row.iterations = e.best().iterations;
      row.error = e.what();
      warm = e.best().phi;
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(row);
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.q < b.q; });
  return rows;
}

}  // namespace spindirac
