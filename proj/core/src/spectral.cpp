#include "alpha_patch/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace alpha_patch::spectral {
namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  PlanPair get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    auto* real = fftw_alloc_real(n);
    auto* cplx = fftw_alloc_complex(n / 2 + 1);
    PlanPair p;
    p.forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), real, cplx, FFTW_ESTIMATE);
    p.backward = fftw_plan_dft_c2r_1d(static_cast<int>(n), cplx, real, FFTW_ESTIMATE);
    fftw_free(real);
    fftw_free(cplx);
    plans_.emplace(n, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

struct RealBuffer {
  explicit RealBuffer(std::size_t n) : data(fftw_alloc_real(n)) {}
  ~RealBuffer() { fftw_free(data); }
  RealBuffer(const RealBuffer&) = delete;
  RealBuffer& operator=(const RealBuffer&) = delete;
  double* data;
};

struct ComplexBuffer {
  explicit ComplexBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {}
  ~ComplexBuffer() { fftw_free(data); }
  ComplexBuffer(const ComplexBuffer&) = delete;
  ComplexBuffer& operator=(const ComplexBuffer&) = delete;
  fftw_complex* data;
};

}  // namespace

std::vector<std::complex<double>> half_spectrum(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n == 0) throw std::invalid_argument("half_spectrum: empty input");
  const auto plans = plan_cache().get(n);
  RealBuffer in(n);
  ComplexBuffer out(n / 2 + 1);
  std::copy(samples.begin(), samples.end(), in.data);
  fftw_execute_dft_r2c(plans.forward, in.data, out.data);
  std::vector<std::complex<double>> c(n / 2 + 1);
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = {out.data[k][0] * inv, out.data[k][1] * inv};
  return c;
}

ScalarField derivative(std::span<const double> samples, int order) {
  if (order != 1 && order != 2) throw std::invalid_argument("spectral::derivative: order must be 1 or 2");
  const std::size_t n = samples.size();
  if (n < 4) throw std::invalid_argument("spectral::derivative: need at least 4 samples");
  const auto plans = plan_cache().get(n);
  RealBuffer in(n);
  ComplexBuffer spec(n / 2 + 1);
  std::copy(samples.begin(), samples.end(), in.data);
  fftw_execute_dft_r2c(plans.forward, in.data, spec.data);

  const double inv = 1.0 / static_cast<double>(n);
  const std::size_t nyquist = (n % 2 == 0) ? n / 2 : n + 1;
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const double kk = static_cast<double>(k);
    const double re = spec.data[k][0] * inv;
    const double im = spec.data[k][1] * inv;
    if (order == 1) {
      if (k == nyquist) {
        spec.data[k][0] = spec.data[k][1] = 0.0;
      } else {  // multiply by i k
        spec.data[k][0] = -kk * im;
        spec.data[k][1] = kk * re;
      }
    } else {
      spec.data[k][0] = -kk * kk * re;
      spec.data[k][1] = -kk * kk * im;
    }
  }
  fftw_execute_dft_c2r(plans.backward, spec.data, in.data);
  return ScalarField(in.data, in.data + n);
}

TrigInterpolant::TrigInterpolant(std::span<const double> samples)
    : n_(samples.size()), coeffs_(half_spectrum(samples)) {}

namespace {

// Weight of mode k in the real reconstruction: 2 for interior modes, 1 for k = 0
// and for the Nyquist mode of an even-length grid.
double mode_weight(std::size_t k, std::size_t n) {
  if (k == 0) return 1.0;
  if (n % 2 == 0 && k == n / 2) return 1.0;
  return 2.0;
}

}  // namespace

double TrigInterpolant::value(double x) const {
  const std::complex<double> step = std::polar(1.0, x);
  std::complex<double> e = 1.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (k > 0 && n_ % 2 == 0 && k == n_ / 2) {
      sum += coeffs_[k].real() * std::cos(static_cast<double>(k) * x);
    } else {
      sum += mode_weight(k, n_) * (coeffs_[k] * e).real();
    }
    e *= step;
  }
  return sum;
}

double TrigInterpolant::derivative(double x) const {
  const std::complex<double> step = std::polar(1.0, x);
  std::complex<double> e = step;
  double sum = 0.0;
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    const double kk = static_cast<double>(k);
    if (n_ % 2 == 0 && k == n_ / 2) {
      sum -= kk * coeffs_[k].real() * std::sin(kk * x);
    } else {
      sum += 2.0 * (std::complex<double>(0.0, kk) * coeffs_[k] * e).real();
    }
    e *= step;
  }
  return sum;
}

double TrigInterpolant::increment(double x, double u) const {
  // e^{ik(x+u)} − e^{ikx} = 2i sin(ku/2) e^{ik(x+u/2)}
  const double mid = x + 0.5 * u;
  const std::complex<double> step = std::polar(1.0, mid);
  std::complex<double> e = step;
  double sum = 0.0;
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double s = std::sin(0.5 * kk * u);
    if (n_ % 2 == 0 && k == n_ / 2) {
      sum -= 2.0 * coeffs_[k].real() * std::sin(kk * mid) * s;
    } else {
      sum += 2.0 * (coeffs_[k] * e * std::complex<double>(0.0, 2.0 * s)).real();
    }
    e *= step;
  }
  return sum;
}

double TrigInterpolant::integral_from_zero(double x) const {
  if (coeffs_.empty()) return 0.0;
  const std::complex<double> step = std::polar(1.0, x);
  std::complex<double> e = step;
  double sum = coeffs_[0].real() * x;
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    const double kk = static_cast<double>(k);
    if (n_ % 2 == 0 && k == n_ / 2) {
      sum += coeffs_[k].real() * std::sin(kk * x) / kk;
    } else {
      sum += 2.0 * (coeffs_[k] * (e - 1.0) / std::complex<double>(0.0, kk)).real();
    }
    e *= step;
  }
  return sum;
}

CurveInterpolant::CurveInterpolant(std::span<const Vec2> nodes) {
  ScalarField xs(nodes.size());
  ScalarField ys(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    xs[j] = nodes[j].x;
    ys[j] = nodes[j].y;
  }
  x_ = TrigInterpolant(xs);
  y_ = TrigInterpolant(ys);
}

VectorField CurveInterpolant::resample(std::size_t n) const {
  VectorField out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = position(kTwoPi * static_cast<double>(j) / static_cast<double>(n));
  return out;
}

}  // namespace alpha_patch::spectral
