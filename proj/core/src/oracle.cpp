// Reference quadrature for the boundary kernels. Only tests and the acceptance
// harness call into this file; production paths use evaluate_boundary_kernels.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "alpha_patch/spectral.hpp"
#include "alpha_patch/velocity.hpp"

namespace alpha_patch {
namespace {

// Near-field radius in label units and the polynomial model of the even part.
constexpr double kNearRadius = 0.1;
constexpr int kModelDegree = 6;  // in t = (u / kNearRadius)²
constexpr double kSampleFloor = 1.0 / 16.0;  // sampled t range [kSampleFloor, 1]

// Solves the (kModelDegree+1)² Vandermonde system by Gaussian elimination with
// partial pivoting. Small and well scaled on [1/16, 1]; not worth a dependency.
std::array<double, kModelDegree + 1> fit_polynomial(const std::array<double, kModelDegree + 1>& t,
                                                    const std::array<double, kModelDegree + 1>& y) {
  constexpr int m = kModelDegree + 1;
  double a[m][m + 1];
  for (int r = 0; r < m; ++r) {
    double p = 1.0;
    for (int c = 0; c < m; ++c) {
      a[r][c] = p;
      p *= t[r];
    }
    a[r][m] = y[r];
  }
  for (int c = 0; c < m; ++c) {
    int piv = c;
    for (int r = c + 1; r < m; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (piv != c)
      for (int k = 0; k <= m; ++k) std::swap(a[c][k], a[piv][k]);
    for (int r = c + 1; r < m; ++r) {
      const double f = a[r][c] / a[c][c];
      for (int k = c; k <= m; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::array<double, m> x{};
  for (int r = m - 1; r >= 0; --r) {
    double s = a[r][m];
    for (int k = r + 1; k < m; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return x;
}

struct KronrodPanel {
  Vec2 kronrod;
  Vec2 gauss;
  double l1 = 0.0;
};

// 31-point Kronrod and embedded 15-point Gauss rules on [a, b]. The Gauss nodes
// are the even-indexed Kronrod abscissae.
KronrodPanel kronrod_panel(const std::function<Vec2(double)>& f, double a, double b) {
  using boost::math::quadrature::gauss;
  using boost::math::quadrature::gauss_kronrod;
  const auto& x = gauss_kronrod<double, 31>::abscissa();
  const auto& wk = gauss_kronrod<double, 31>::weights();
  const auto& wg = gauss<double, 15>::weights();
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  KronrodPanel p;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Vec2 fs;
    double abs_sum;
    if (i == 0) {
      fs = f(c);
      abs_sum = norm(fs);
    } else {
      const Vec2 lo = f(c - r * x[i]);
      const Vec2 hi = f(c + r * x[i]);
      fs = lo + hi;
      abs_sum = norm(lo) + norm(hi);
    }
    p.kronrod = p.kronrod + fs * wk[i];
    if (i % 2 == 0) p.gauss = p.gauss + fs * wg[i / 2];
    p.l1 += wk[i] * abs_sum;
  }
  p.kronrod = p.kronrod * r;
  p.gauss = p.gauss * r;
  p.l1 *= r;
  return p;
}

// Adaptive bisection with an absolute tolerance tol·∫|f| shared by both components,
// so a component that integrates to zero does not force endless refinement.
Vec2 adaptive_kronrod(const std::function<Vec2(double)>& f, double a, double b, double tol) {
  constexpr int kMaxDepth = 18;
  const KronrodPanel whole = kronrod_panel(f, a, b);
  const double budget = tol * std::max(whole.l1, 1e-300);
  bool converged = true;
  std::function<Vec2(double, double, const KronrodPanel&, int)> refine = [&](double lo, double hi,
                                                                             const KronrodPanel& p, int depth) {
    const double local = budget * (hi - lo) / (b - a);
    if (norm(p.kronrod - p.gauss) <= local) return p.kronrod;
    if (depth >= kMaxDepth) {
      converged = false;
      return p.kronrod;
    }
    const double mid = 0.5 * (lo + hi);
    return refine(lo, mid, kronrod_panel(f, lo, mid), depth + 1) + refine(mid, hi, kronrod_panel(f, mid, hi), depth + 1);
  };
  const Vec2 result = refine(a, b, whole, 0);
  if (!converged) throw std::runtime_error("oracle quadrature did not reach tolerance " + std::to_string(tol));
  return result;
}

// ∫_{−π}^{π} F(u) du for F(u) = |u|^{−a} χ(u) + (odd part), where
// pair(u) = F(u) + F(−u) for u > 0 and χ(u) = u^a pair(u) / 2 is smooth and even.
Vec2 symmetric_integral(const std::function<Vec2(double)>& pair, double a, double tol) {
  // Near field: χ modelled by a polynomial in t = (u/r)² fitted at Chebyshev points
  // of [kSampleFloor, 1], integrated exactly against u^{−a} on [0, r].
  std::array<double, kModelDegree + 1> ts{}, cx{}, cy{};
  for (int i = 0; i <= kModelDegree; ++i) {
    const double c = std::cos(kPi * (i + 0.5) / (kModelDegree + 1));
    ts[i] = kSampleFloor + (1.0 - kSampleFloor) * 0.5 * (1.0 + c);
    const double u = kNearRadius * std::sqrt(ts[i]);
    const Vec2 chi = pair(u) * (0.5 * std::pow(u, a));
    cx[i] = chi.x;
    cy[i] = chi.y;
  }
  const auto px = fit_polynomial(ts, cx);
  const auto py = fit_polynomial(ts, cy);
  Vec2 near{};
  for (int m = 0; m <= kModelDegree; ++m) {
    const double w = std::pow(kNearRadius, 1.0 - a) / (2.0 * m + 1.0 - a);
    near = near + Vec2{px[m], py[m]} * (2.0 * w);
  }

  // Far field: smooth integrand on [r, π].
  const Vec2 far = adaptive_kronrod(pair, kNearRadius, kPi, tol);
  return near + far;
}

}  // namespace

Vec2 oracle_velocity(const ClosedCurve& curve, const KernelParams& params, std::size_t node, double tol) {
  if (node >= curve.size()) throw std::out_of_range("oracle_velocity: node index");
  const spectral::CurveInterpolant interp(curve.nodes());
  const double x = curve.label_spacing() * static_cast<double>(node);
  const double alpha = params.alpha();
  auto side = [&](double u) {
    const Vec2 d = interp.displacement(x, u);
    return interp.tangent_vector(x + u) * std::pow(dot(d, d), -alpha);
  };
  auto pair = [&](double u) { return side(u) + side(-u); };
  return symmetric_integral(pair, params.singular_exponent(), tol) * (-1.0 / (2.0 * alpha));
}

Vec2 oracle_ds_velocity(const ClosedCurve& curve, const KernelParams& params, std::size_t node, double tol) {
  if (node >= curve.size()) throw std::out_of_range("oracle_ds_velocity: node index");
  const spectral::CurveInterpolant interp(curve.nodes());
  const double x = curve.label_spacing() * static_cast<double>(node);
  const double alpha = params.alpha();
  const Vec2 t0 = interp.tangent_vector(x);
  const Vec2 Tx = t0 / norm(t0);
  auto side = [&](double u) {
    // γ(x) − γ(x+u) = −displacement
    const Vec2 d = interp.displacement(x, u);
    const double d2 = dot(d, d);
    return interp.tangent_vector(x + u) * (-dot(d, Tx) * std::pow(d2, -1.0 - alpha));
  };
  auto pair = [&](double u) { return side(u) + side(-u); };
  return symmetric_integral(pair, params.singular_exponent(), tol);
}

}  // namespace alpha_patch
