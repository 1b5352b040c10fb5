#pragma once

#include <complex>
#include <span>
#include <vector>

#include "alpha_patch/vec2.hpp"

/// Trigonometric (Fourier) machinery for 2π-periodic samples on a uniform grid.
namespace alpha_patch::spectral {

/// Spectral derivative of the given order (1 or 2) of uniform samples over [0, 2π).
/// The Nyquist mode is dropped for odd orders.
ScalarField derivative(std::span<const double> samples, int order);

/// Coefficients c_k = (1/N) Σ f_j e^{-ik x_j}, k = 0..N/2.
std::vector<std::complex<double>> half_spectrum(std::span<const double> samples);

/// Band-limited interpolant through uniform samples of a 2π-periodic function.
class TrigInterpolant {
 public:
  TrigInterpolant() = default;
  explicit TrigInterpolant(std::span<const double> samples);

  [[nodiscard]] double value(double x) const;
  [[nodiscard]] double derivative(double x) const;
  /// f(x + u) − f(x), evaluated without cancellation for small u.
  [[nodiscard]] double increment(double x, double u) const;
  /// Exact antiderivative ∫_0^x of the interpolant.
  [[nodiscard]] double integral_from_zero(double x) const;
  /// Mean value over one period.
  [[nodiscard]] double mean() const { return coeffs_.empty() ? 0.0 : coeffs_[0].real(); }
  [[nodiscard]] std::size_t size() const { return n_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::complex<double>> coeffs_;
};

/// Interpolant of a closed planar curve, one TrigInterpolant per coordinate.
class CurveInterpolant {
 public:
  CurveInterpolant() = default;
  explicit CurveInterpolant(std::span<const Vec2> nodes);

  [[nodiscard]] Vec2 position(double x) const { return {x_.value(x), y_.value(x)}; }
  [[nodiscard]] Vec2 tangent_vector(double x) const { return {x_.derivative(x), y_.derivative(x)}; }
  /// γ(x + u) − γ(x) with full relative accuracy as u → 0.
  [[nodiscard]] Vec2 displacement(double x, double u) const { return {x_.increment(x, u), y_.increment(x, u)}; }
  [[nodiscard]] std::size_t size() const { return x_.size(); }

  /// Samples the interpolant at N' uniform labels.
  [[nodiscard]] VectorField resample(std::size_t n) const;

 private:
  TrigInterpolant x_;
  TrigInterpolant y_;
};

}  // namespace alpha_patch::spectral
