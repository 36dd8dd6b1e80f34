#include "spindirac/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numbers>

#include "spindirac/errors.hpp"

namespace spindirac {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW plans are cached per grid size. Planning is not thread safe, execution
// through the new-array interface is.
class PlanCache {
 public:
  struct Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
  };

  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  Plans get(int n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<cplx> a(static_cast<std::size_t>(n) * n), b(a.size());
    auto* in = reinterpret_cast<fftw_complex*>(a.data());
    auto* out = reinterpret_cast<fftw_complex*>(b.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    Plans p;
    p.forward = fftw_plan_dft_2d(n, n, in, out, FFTW_FORWARD, flags);
    p.backward = fftw_plan_dft_2d(n, n, in, out, FFTW_BACKWARD, flags);
    plans_.emplace(n, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

 private:
  std::mutex mutex_;
  std::map<int, Plans> plans_;
};

void check_size(std::size_t size, int n) {
  if (n < 2 || size != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw SizeError("sample array does not match grid size");
  }
}

// exp(±2πi(f1·j + f2·l)/n) applied in place.
void apply_twist(std::vector<cplx>& data, int n, double f1, double f2, double sign) {
  if (f1 == 0.0 && f2 == 0.0) return;
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      const double phase = sign * kTwoPi * (f1 * j + f2 * l) / n;
      data[static_cast<std::size_t>(j) * n + l] *= cplx(std::cos(phase), std::sin(phase));
    }
  }
}

std::vector<cplx> derivative(std::span<const cplx> samples, int n, bool along_s) {
  std::vector<cplx> c = forward_transform(samples, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const int idx = along_s ? a : b;
      const int freq = frequency(idx, n);
      const double factor = (2 * idx == n) ? 0.0 : kTwoPi * freq;
      c[static_cast<std::size_t>(a) * n + b] *= cplx(0.0, factor);
    }
  }
  return inverse_transform(c, n);
}

}  // namespace

std::vector<cplx> forward_transform(std::span<const cplx> samples, int n, double f1, double f2) {
  check_size(samples.size(), n);
  std::vector<cplx> in(samples.begin(), samples.end());
  apply_twist(in, n, f1, f2, -1.0);
  std::vector<cplx> out(in.size());
  auto plans = PlanCache::instance().get(n);
  fftw_execute_dft(plans.forward, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / (static_cast<double>(n) * n);
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<cplx> inverse_transform(std::span<const cplx> coeffs, int n, double f1, double f2) {
  check_size(coeffs.size(), n);
  std::vector<cplx> in(coeffs.begin(), coeffs.end());
  std::vector<cplx> out(in.size());
  auto plans = PlanCache::instance().get(n);
  fftw_execute_dft(plans.backward, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  apply_twist(out, n, f1, f2, 1.0);
  return out;
}

SeriesPoint evaluate_series(std::span<const cplx> coeffs, int n, double f1, double f2, double s,
                            double t) {
  check_size(coeffs.size(), n);
  std::vector<cplx> es(n), et(n);
  std::vector<double> ws(n), wt(n);
  for (int a = 0; a < n; ++a) {
    ws[a] = frequency(a, n) + f1;
    wt[a] = frequency(a, n) + f2;
    es[a] = std::polar(1.0, kTwoPi * ws[a] * s);
    et[a] = std::polar(1.0, kTwoPi * wt[a] * t);
  }
  SeriesPoint p{};
  for (int a = 0; a < n; ++a) {
    cplx row{}, row_dt{};
    for (int b = 0; b < n; ++b) {
      const cplx term = coeffs[static_cast<std::size_t>(a) * n + b] * et[b];
      row += term;
      row_dt += term * cplx(0.0, kTwoPi * wt[b]);
    }
    p.value += es[a] * row;
    p.d_s += es[a] * row * cplx(0.0, kTwoPi * ws[a]);
    p.d_t += es[a] * row_dt;
  }
  return p;
}

std::vector<cplx> derivative_s(std::span<const cplx> samples, int n) {
  return derivative(samples, n, true);
}

std::vector<cplx> derivative_t(std::span<const cplx> samples, int n) {
  return derivative(samples, n, false);
}

}  // namespace spindirac
