#include "spindirac/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "spindirac/dirac.hpp"

namespace spindirac {

namespace {

// Unknown of the bordered Newton system: (δφ, δλ). The inner product is
// Re⟨·,·⟩_{L²} + δλ₁δλ₂, under which the bordered Jacobian is symmetric.
struct Bordered {
  SpinorField field;
  double scalar = 0.0;
};

double dot(const Bordered& a, const Bordered& b) {
  return inner(a.field, b.field).real() + a.scalar * b.scalar;
}

void axpy(double alpha, const Bordered& x, Bordered& y) {
  y.field.axpy(alpha, x.field);
  y.scalar += alpha * x.scalar;
}

Bordered scaled(double alpha, const Bordered& x) {
  Bordered out = x;
  out.field *= cplx(alpha, 0.0);
  out.scalar *= alpha;
  return out;
}

Bordered zeros_like(const Bordered& x) {
  return {SpinorField(x.field.lattice(), x.field.spin(), x.field.n()), 0.0};
}

struct MinresResult {
  Bordered x;
  int iterations = 0;
  double residual = 0.0;
};

// MINRES (Paige & Saunders) for a symmetric, possibly singular but
// consistent, operator. Starts from x = 0.
template <typename Op>
MinresResult minres(const Op& apply, const Bordered& b, double rtol, int max_iter) {
  MinresResult out{zeros_like(b), 0, 0.0};
  const double beta1 = std::sqrt(dot(b, b));
  if (beta1 == 0.0) return out;

  Bordered r1 = b;
  Bordered r2 = b;
  Bordered y = b;
  Bordered w = zeros_like(b);
  Bordered w2 = zeros_like(b);
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs = -1.0, sn = 0.0;

  for (int itn = 1; itn <= max_iter; ++itn) {
    const Bordered v = scaled(1.0 / beta, y);
    y = apply(v);
    if (itn >= 2) axpy(-beta / oldb, r1, y);
    const double alfa = dot(v, y);
    axpy(-alfa / beta, r2, y);
    r1 = std::move(r2);
    r2 = y;
    oldb = beta;
    beta = std::sqrt(std::max(0.0, dot(r2, r2)));

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), std::numeric_limits<double>::min());
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    Bordered w1 = std::move(w2);
    w2 = std::move(w);
    w = v;
    axpy(-oldeps, w1, w);
    axpy(-delta, w2, w);
    w = scaled(1.0 / gamma, w);
    axpy(phi, w, out.x);

    out.iterations = itn;
    out.residual = phibar;
    if (phibar <= rtol * beta1 || beta <= 1e-300) break;
  }
  return out;
}

double p_integral(const SpinorField& phi, double p) { return lp_integral(phi, p); }

}  // namespace

SpinorField residual_field(const SpinorField& phi, double lambda, double p) {
  if (!(p >= 2.0 - 1e-12 && p <= 4.0 + 1e-12)) throw DomainError("exponent p must lie in [2, 4]");
  SpinorField r = apply_dirac(phi);
  r.axpy(-lambda, pointwise_power(phi, p - 2.0));
  return r;
}

double lambda_consistency(const SpinorField& phi, double p) {
  const double denom = p_integral(phi, p);
  if (!(denom > 0.0)) throw DegenerateInputError("zero spinor field");
  return inner(apply_dirac(phi), phi).real() / denom;
}

bool below_sphere_threshold(double lambda_sqrt_area) {
  return lambda_sqrt_area < sphere_lambda_min(2);
}

ExponentSolve solve_at_exponent(double p, LambdaMode mode, const SpinorField& init,
                                double lambda_init, const NewtonOptions& opts) {
  if (!(p >= 2.0 - 1e-12 && p <= 4.0 + 1e-12)) throw DomainError("exponent p must lie in [2, 4]");
  if (!(max_abs(init) > 0.0)) throw DegenerateInputError("Newton initial guess is the zero field");
  const double tol_solve = opts.tol_solve > 0.0 ? opts.tol_solve : 1e-9 * init.n();
  const bool keep_off_kernel = init.spin().trivial() && std::abs(p - 2.0) < 1e-12;
  const bool normalized = mode == LambdaMode::Normalized;

  SpinorField phi = keep_off_kernel ? project_out_kernel(init) : init;
  double lambda = lambda_init;

  auto constraint = [&](const SpinorField& f) { return p_integral(f, p) - 1.0; };
  auto merit = [&](const SpinorField& r, double c) {
    const double rn = l2_norm(r);
    return rn * rn + (normalized ? c * c : 0.0);
  };

  SpinorField res = residual_field(phi, lambda, p);
  double cval = constraint(phi);
  int it = 0;
  for (; it <= opts.max_newton; ++it) {
    const double rnorm = l2_norm(res);
    const bool norm_ok = !normalized || std::abs(std::pow(cval + 1.0, 1.0 / p) - 1.0) <= opts.tol_norm;
    if (rnorm <= tol_solve && norm_ok) break;
    if (it == opts.max_newton) {
      throw ContinuationError("Newton did not converge at p = " + std::to_string(p) +
                                  " (residual " + std::to_string(rnorm) + ")",
                              {});
    }

    // Pointwise data of the linearization.
    const SpinorField weight = pointwise_power(phi, p - 2.0);  // w = |φ|^{p-2}φ
    std::vector<double> amp(phi.size()), amp4(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
      const double r2 = phi.norm2_at(i);
      amp[i] = r2 > 0.0 ? std::pow(r2, 0.5 * (p - 2.0)) : 0.0;
      amp4[i] = r2 > 0.0 ? (p - 2.0) * std::pow(r2, 0.5 * (p - 4.0)) : 0.0;
    }

    auto jacobian = [&](const Bordered& v) {
      const SpinorField& d = v.field;
      Bordered out{apply_dirac(d), 0.0};
      for (std::size_t i = 0; i < d.size(); ++i) {
        const cplx a = phi.plus()[i], b = phi.minus()[i];
        const double re = (std::conj(a) * d.plus()[i] + std::conj(b) * d.minus()[i]).real();
        out.field.plus()[i] -= lambda * (amp[i] * d.plus()[i] + amp4[i] * re * a);
        out.field.minus()[i] -= lambda * (amp[i] * d.minus()[i] + amp4[i] * re * b);
      }
      if (normalized) {
        out.field.axpy(-v.scalar, weight);
        out.scalar = -inner(weight, d).real();
      }
      if (keep_off_kernel) out.field = project_out_kernel(out.field);
      return out;
    };

    Bordered rhs{res, normalized ? cval / p : 0.0};
    rhs.field *= cplx(-1.0, 0.0);
    if (keep_off_kernel) rhs.field = project_out_kernel(rhs.field);
    const double rtol = std::max(opts.krylov_rtol, std::min(1e-3, 0.1 * std::sqrt(merit(res, cval))));
    MinresResult step = minres(jacobian, rhs, rtol, opts.max_krylov);
    if (keep_off_kernel) step.x.field = project_out_kernel(step.x.field);

    // Damped update on the merit ‖R‖² + c².
    const double m0 = merit(res, cval);
    double t = 1.0;
    bool accepted = false;
    while (t >= opts.min_damping) {
      SpinorField trial = phi;
      trial.axpy(t, step.x.field);
      const double trial_lambda = normalized ? lambda + t * step.x.scalar : lambda;
      SpinorField trial_res = residual_field(trial, trial_lambda, p);
      const double trial_c = constraint(trial);
      if (merit(trial_res, trial_c) < m0) {
        phi = std::move(trial);
        lambda = trial_lambda;
        res = std::move(trial_res);
        cval = trial_c;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (l2_norm(res) <= tol_solve && std::abs(std::pow(cval + 1.0, 1.0 / p) - 1.0) <= 10 * opts.tol_norm) break;
      throw ContinuationError(
          "Newton step failed to reduce the residual at p = " + std::to_string(p) +
              "; the Jacobian may be singular along kernel directions, perturb the initial guess",
          {});
    }
  }

  Solution sol{phi, lambda, p, 0.0, 0.0, 0.0};
  if (normalized) {
    // Absorb the remaining constraint defect.
    sol.phi *= cplx(1.0 / lp_norm(sol.phi, p), 0.0);
  }
  sol.residual = l2_norm(residual_field(sol.phi, sol.lambda, p));
  sol.norm_p = lp_norm(sol.phi, p);
  return {std::move(sol), it};
}

ExponentSolve solve_at_exponent(double p, const SpinorField& init, const NewtonOptions& opts) {
  if (!(max_abs(init) > 0.0)) throw DegenerateInputError("Newton initial guess is the zero field");
  SpinorField start = init.spin().trivial() && std::abs(p - 2.0) < 1e-12 ? project_out_kernel(init)
                                                                          : init;
  const double np = lp_norm(start, p);
  if (!(np > 0.0)) throw DegenerateInputError("initial guess lies in ker D");
  start *= cplx(1.0 / np, 0.0);
  return solve_at_exponent(p, LambdaMode::Normalized, start, lambda_consistency(start, p), opts);
}

void ContinuationSchedule::validate() const {
  if (p_values.size() < 2) throw ValidationError("schedule", "needs at least two exponents");
  if (p_values.front() != 2.0) throw ValidationError("schedule", "first exponent must be 2");
  if (p_values.back() != 4.0) throw ValidationError("schedule", "last exponent must be 4");
  for (std::size_t i = 1; i < p_values.size(); ++i) {
    if (!(p_values[i] > p_values[i - 1])) {
      throw ValidationError("schedule", "exponents must be strictly increasing");
    }
  }
}

CriticalSolve solve_critical(const SpinorField& init, const ContinuationSchedule& schedule) {
  schedule.validate();
  CriticalSolve out{Solution{init, 0.0, 2.0, 0.0, 0.0, 0.0}, {}};
  SpinorField warm = init;
  for (double p : schedule.p_values) {
    std::optional<ExponentSolve> step;
    try {
      step.emplace(solve_at_exponent(p, warm, schedule.newton));
    } catch (const Error& e) {
      throw ContinuationError(std::string("continuation step failed: ") + e.what(), out.trace);
    }
    out.trace.push_back({p, step->solution.lambda, max_abs(step->solution.phi),
                         step->solution.residual, step->newton_iterations});
    warm = step->solution.phi;
    out.solution = std::move(step->solution);
  }
  return out;
}

CriticalSolve solve_critical(const Lattice& lat, const SpinStructure& spin, int n,
                             const ContinuationSchedule& schedule) {
  return solve_critical(first_positive_eigenspinor(lat, spin, n), schedule);
}

}  // namespace spindirac
