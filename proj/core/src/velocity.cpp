#include "alpha_patch/velocity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "alpha_patch/diagnostics.hpp"
#include "alpha_patch/fit.hpp"
#include "alpha_patch/parallel.hpp"
#include "alpha_patch/singular_quadrature.hpp"

namespace alpha_patch {

KernelParams::KernelParams(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie strictly inside (0, 0.5)");
}

namespace {

constexpr double kCoincident2 = 1e-24;

[[noreturn]] void coincident(std::size_t i, std::size_t j) {
  throw std::invalid_argument("coincident nodes " + std::to_string(i) + " and " + std::to_string(j));
}

void warn_if_rough(std::span<const Vec2> T, double length, const KernelParams& params) {
  const double beta_hat = empirical_holder_exponent(T, length);
  if (beta_hat <= params.singular_exponent())
    warn("empirical Hölder exponent of T (" + std::to_string(beta_hat) + ") does not exceed 2α (" +
         std::to_string(params.singular_exponent()) + "); the principal value is not absolutely controlled");
}

}  // namespace

void evaluate_boundary_kernels(const KernelInput& in, const KernelParams& params, VectorField* v, VectorField* dsv) {
  const std::size_t n = in.nodes.size();
  if (in.T.size() != n || in.g.size() != n) throw std::invalid_argument("evaluate_boundary_kernels: size mismatch");
  if (n < 8) throw std::invalid_argument("evaluate_boundary_kernels: need at least 8 nodes");
  const double alpha = params.alpha();
  const double a = params.singular_exponent();
  const double h = kTwoPi / static_cast<double>(n);
  const quadrature::SingularCorrection corr(a);
  const double ha[4] = {0.0, std::pow(h, a), std::pow(2.0 * h, a), std::pow(3.0 * h, a)};

  VectorField Tg(n);
  for (std::size_t j = 0; j < n; ++j) Tg[j] = in.T[j] * in.g[j];

  const std::size_t half = n / 2;
  VectorField sv(n), sp(n);
  std::vector<std::array<Vec2, 4>> phi_e(n), chi(n);

  // |γ_i − γ_j|^{−2α} is symmetric, so it is computed once per unordered pair:
  // offsets are processed in blocks, with pw[k − k0][i] holding the value for the
  // pair (i, i + k). Each target then accumulates its ±k pairs in ascending k,
  // which fixes the summation order independently of the thread count.
  constexpr std::size_t kBlock = 32;
  std::vector<double> pw(kBlock * n), pq(kBlock * n);  // r^{−2α}, r^{−2−2α}
  for (std::size_t k0 = 1; k0 <= half; k0 += kBlock) {
    const std::size_t k1 = std::min(half + 1, k0 + kBlock);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i)
        for (std::size_t k = k0; k < k1; ++k) {
          const std::size_t j = i + k < n ? i + k : i + k - n;
          const Vec2 d = in.nodes[i] - in.nodes[j];
          const double d2 = dot(d, d);
          if (d2 < kCoincident2) coincident(i, j);
          const double p = std::pow(d2, -alpha);
          pw[(k - k0) * n + i] = p;
          pq[(k - k0) * n + i] = p / d2;
        }
    });
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const Vec2 xi = in.nodes[i];
        const Vec2 Ti = in.T[i];
        Vec2 acc_v = sv[i], acc_p = sp[i];
        for (std::size_t k = k0; k < k1; ++k) {
          const std::size_t jp = i + k < n ? i + k : i + k - n;
          const std::size_t jm = i >= k ? i - k : i + n - k;
          const std::size_t row = (k - k0) * n;
          Vec2 fv = Tg[jp] * pw[row + i];
          Vec2 fp = Tg[jp] * (pq[row + i] * dot(xi - in.nodes[jp], Ti));
          if (jm != jp) {
            fv += Tg[jm] * pw[row + jm];
            fp += Tg[jm] * (pq[row + jm] * dot(xi - in.nodes[jm], Ti));
          }
          acc_v += fv;
          acc_p += fp;
          if (k <= 3) {
            phi_e[i][k] = fv * (0.5 * ha[k]);
            chi[i][k] = fp * (0.5 * ha[k]);
          }
        }
        sv[i] = acc_v;
        sp[i] = acc_p;
      }
    });
  }

  if (v) {
    v->resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 phi0 = in.T[i] * std::pow(in.g[i], 1.0 - a);
      const Vec2 integral = sv[i] * h + corr.weakly_singular(h, phi0, phi_e[i][1], phi_e[i][2]);
      (*v)[i] = integral * (-1.0 / (2.0 * alpha));
    }
  }
  if (dsv) {
    dsv->resize(n);
    for (std::size_t i = 0; i < n; ++i)
      (*dsv)[i] = sp[i] * h + corr.principal_value(h, chi[i][1], chi[i][2], chi[i][3]);
  }
}

VectorField velocity_on_boundary(const ClosedCurve& curve, const KernelParams& params) {
  const auto geo = geometry(curve);
  VectorField v;
  evaluate_boundary_kernels({curve.nodes(), geo.T, geo.g}, params, &v, nullptr);
  return v;
}

VectorField ds_velocity_arclength(const ClosedCurve& curve, const KernelParams& params) {
  if (metric_deviation(curve) > 1e-6)
    throw std::invalid_argument("ds_velocity_arclength: curve is not arc-length parameterized");
  // With a constant metric the label integral is the arc-length integral.
  return ds_velocity_lagrangian(curve, params);
}

VectorField ds_velocity_lagrangian(const ClosedCurve& curve, const KernelParams& params) {
  const auto geo = geometry(curve);
  warn_if_rough(geo.T, total_length(curve), params);
  VectorField dsv;
  evaluate_boundary_kernels({curve.nodes(), geo.T, geo.g}, params, nullptr, &dsv);
  return dsv;
}

BoundaryVelocity boundary_velocity(const ClosedCurve& curve, const KernelParams& params) {
  return boundary_velocity(curve, geometry(curve), params);
}

BoundaryVelocity boundary_velocity(const ClosedCurve& curve, const GeometryFields& geo, const KernelParams& params) {
  BoundaryVelocity out;
  evaluate_boundary_kernels({curve.nodes(), geo.T, geo.g}, params, &out.v, &out.dsv);
  const std::size_t n = curve.size();
  out.dsv_T.resize(n);
  out.dsv_N.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.dsv_T[j] = dot(out.dsv[j], geo.T[j]);
    out.dsv_N[j] = dot(out.dsv[j], geo.Nrm[j]);
  }
  return out;
}

double kernel_K(Vec2 gamma_y, double g_y, Vec2 gamma_x, Vec2 T_x, const KernelParams& params) {
  const Vec2 d = gamma_x - gamma_y;
  const double d2 = dot(d, d);
  if (d2 < kCoincident2) throw std::invalid_argument("kernel_K: coincident points");
  return g_y * dot(d, T_x) * std::pow(d2, -1.0 - params.alpha());
}

KernelSymmetryReport kernel_symmetry_check(const ClosedCurve& curve, const KernelParams& params, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("kernel_symmetry_check: beta must be positive");
  if (metric_deviation(curve) > 1e-6)
    throw std::invalid_argument("kernel_symmetry_check: curve is not arc-length parameterized");
  const auto geo = geometry(curve);
  const std::size_t n = curve.size();
  const double ds = total_length(curve) / static_cast<double>(n);
  const double weight_exp = 1.0 - beta + params.singular_exponent();
  const std::size_t half = n / 2;

  // sup_i |K(y,x)+K(x,y)| for each offset k; the sum is symmetric in (i, i+k).
  std::vector<double> by_offset(half + 1, 0.0);
  // Spectral tangents carry a relative error of about N·eps, so the two terms cancel
  // only to that fraction of the kernel bound |γ(x)−γ(y)|^{−1−2α}.
  const double roundoff = 8.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon();
  parallel_for(half, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin + 1; k <= end; ++k) {
      double m = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + k) % n;
        const double kyx = kernel_K(curve[j], 1.0, curve[i], geo.T[i], params);
        const double kxy = kernel_K(curve[i], 1.0, curve[j], geo.T[j], params);
        m = std::max(m, std::abs(kyx + kxy));
        scale = std::max(scale, std::pow(dot(curve[j] - curve[i], curve[j] - curve[i]), -0.5 - params.alpha()));
      }
      // Sums at the rounding level of the individual terms carry no information.
      by_offset[k] = m > roundoff * scale ? m : 0.0;
    }
  });

  KernelSymmetryReport rep;
  for (std::size_t k = 1; k <= half; ++k)
    rep.constant = std::max(rep.constant, by_offset[k] * std::pow(static_cast<double>(k) * ds, weight_exp));

  std::vector<double> xs, ys;
  const long kmax = std::max<long>(2, static_cast<long>(n / 8));
  for (long k : log_spaced_offsets(1, kmax, 16)) {
    if (by_offset[k] <= 0.0) continue;
    xs.push_back(static_cast<double>(k) * ds);
    ys.push_back(by_offset[k]);
  }
  rep.r_min = static_cast<double>(1) * ds;
  rep.r_max = static_cast<double>(kmax) * ds;
  rep.fit_points = xs.size();
  rep.fitted_slope = xs.size() >= 2 ? fit_loglog(xs, ys).slope : 0.0;
  return rep;
}

}  // namespace alpha_patch
