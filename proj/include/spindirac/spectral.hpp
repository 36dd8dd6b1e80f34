#pragma once

// Uniform-grid Fourier transforms on the unit square of lattice coordinates
// (s, t) ∈ [0,1)², sample (j, l) at (j/n, l/n), row-major with j major.
//
// A twisted series f(s,t) = Σ c[a,b] exp(2πi((m_a + f1)s + (m_b + f2)t)) with
// integer frequencies m_a ∈ [-n/2, n/2) and fractional shifts f1, f2 ∈ {0, ½}.

#include <complex>
#include <span>
#include <vector>

namespace spindirac {

using cplx = std::complex<double>;

/// Integer frequency stored at FFT index a.
inline int frequency(int a, int n) { return a < n / 2 ? a : a - n; }

/// Samples -> coefficients (normalized so that inverse_transform inverts it).
std::vector<cplx> forward_transform(std::span<const cplx> samples, int n, double f1 = 0.0,
                                    double f2 = 0.0);

/// Coefficients -> samples.
std::vector<cplx> inverse_transform(std::span<const cplx> coeffs, int n, double f1 = 0.0,
                                    double f2 = 0.0);

struct SeriesPoint {
  cplx value;
  cplx d_s;  // ∂/∂s
  cplx d_t;  // ∂/∂t
};

/// Evaluates the series and its first derivatives at an arbitrary (s, t).
SeriesPoint evaluate_series(std::span<const cplx> coeffs, int n, double f1, double f2, double s,
                            double t);

/// Spectral ∂/∂s and ∂/∂t of periodic samples (f1 = f2 = 0). The Nyquist
/// frequency is dropped from derivatives.
std::vector<cplx> derivative_s(std::span<const cplx> samples, int n);
std::vector<cplx> derivative_t(std::span<const cplx> samples, int n);

}  // namespace spindirac
