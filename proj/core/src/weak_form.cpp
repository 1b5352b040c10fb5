#include "alpha_patch/weak_form.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "alpha_patch/parallel.hpp"
#include "alpha_patch/spectral.hpp"

namespace alpha_patch {

namespace {

// exp(1 − 1/(1 − s)) for s = r² < 1, else 0.
double bump(double s) { return s < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s)) : 0.0; }

double smooth_step(double u) {
  if (u <= 0.0) return 1.0;
  if (u >= 1.0) return 0.0;
  return 1.0 / (1.0 + std::exp(1.0 / (1.0 - u) - 1.0 / u));
}

double step_derivative(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double r = std::exp(1.0 / u - 1.0 / (1.0 - u));
  return -(1.0 / ((1.0 - u) * (1.0 - u)) + 1.0 / (u * u)) / (r + 2.0 + 1.0 / r);
}

template <unsigned Points>
struct UnitRule {
  std::array<double, Points> x{};
  std::array<double, Points> w{};
  UnitRule() {
    using boost::math::quadrature::gauss;
    const auto& a = gauss<double, Points>::abscissa();
    const auto& wt = gauss<double, Points>::weights();
    std::size_t k = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0.0) {
        x[k] = 0.5;
        w[k++] = 0.5 * wt[i];
        continue;
      }
      x[k] = 0.5 * (1.0 - a[i]);
      w[k++] = 0.5 * wt[i];
      x[k] = 0.5 * (1.0 + a[i]);
      w[k++] = 0.5 * wt[i];
    }
  }
};

const UnitRule<8>& radial_rule() {
  static const UnitRule<8> r;
  return r;
}

const UnitRule<3>& edge_rule() {
  static const UnitRule<3> r;
  return r;
}

// ∫ over the region bounded by the trigonometric interpolant of the nodes. Curved
// fan cells p = c + λ(γ(x) − c) over each label interval carry the Jacobian
// λ (γ − c) × γ'. Integrating over the chord polygon instead would put the
// quadrature points O(h²) off the boundary, where v is only (1−2α)-Hölder.
template <typename F>
double domain_integral(const ClosedCurve& curve, F f) {
  const std::size_t n = curve.size();
  const double h = curve.label_spacing();
  Vec2 c{0.0, 0.0};
  for (const auto& p : curve.nodes()) c += p;
  c = c / static_cast<double>(n);

  const spectral::CurveInterpolant interp(curve.nodes());
  const auto& er = edge_rule();
  constexpr std::size_t kEdge = std::tuple_size_v<decltype(UnitRule<3>::x)>;
  std::vector<std::array<Vec2, kEdge>> pos(n), tan(n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j)
      for (std::size_t m = 0; m < kEdge; ++m) {
        const double x = h * (static_cast<double>(j) + er.x[m]);
        pos[j][m] = interp.position(x) - c;
        tan[j][m] = interp.tangent_vector(x);
      }
  });

  std::vector<double> parts(n, 0.0);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    const auto& rr = radial_rule();
    for (std::size_t j = begin; j < end; ++j) {
      const Vec2 a = curve[j] - c;
      const Vec2 b = curve[(j + 1) % n] - c;
      const double reach = std::max(norm(a), norm(b));
      const double edge = std::max(norm(b - a), 1e-300);
      // Panels halve toward the boundary until they are about one edge long.
      const int levels = std::clamp(static_cast<int>(std::ceil(std::log2(reach / edge))), 1, 40);
      double sum = 0.0;
      for (std::size_t m = 0; m < kEdge; ++m) {
        const double jac = cross(pos[j][m], tan[j][m]);
        double radial = 0.0;
        double lo = 0.0;
        for (int k = 0; k <= levels; ++k) {
          const double hi = k == levels ? 1.0 : 1.0 - std::ldexp(1.0, -(k + 1));
          const double width = hi - lo;
          for (std::size_t i = 0; i < rr.x.size(); ++i) {
            const double lam = lo + width * rr.x[i];
            radial += rr.w[i] * width * lam * f(c + pos[j][m] * lam);
          }
          lo = hi;
        }
        sum += er.w[m] * jac * radial;
      }
      parts[j] = sum * h;
    }
  });
  double total = 0.0;
  for (double p : parts) total += p;
  return total;
}

}  // namespace

void TestFunction::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("test function radius must be positive");
  if (!(t_support > 0.0) || !std::isfinite(t_support))
    throw std::invalid_argument("test function time support must be positive");
}

double TestFunction::value(Vec2 x, double t) const {
  return bump(norm2(x - center) / (radius * radius)) * smooth_step(t / t_support);
}

double TestFunction::dt(Vec2 x, double t) const {
  return bump(norm2(x - center) / (radius * radius)) * step_derivative(t / t_support) / t_support;
}

Vec2 TestFunction::gradient(Vec2 x, double t) const {
  const double s = norm2(x - center) / (radius * radius);
  const double tau = smooth_step(t / t_support);
  if (tau == 0.0 || s >= 1.0) return {0.0, 0.0};
  const double q = 1.0 - s;
  return (x - center) * (bump(s) * tau * (-2.0 / (q * q)) / (radius * radius));
}

Vec2 interior_velocity(const ClosedCurve& curve, const GeometryFields& geo, const KernelParams& params, Vec2 x) {
  const double alpha = params.alpha();
  Vec2 sum{0.0, 0.0};
  for (std::size_t j = 0; j < curve.size(); ++j)
    sum += geo.T[j] * (geo.g[j] * std::pow(norm2(x - curve[j]), -alpha));
  return sum * (-curve.label_spacing() / (2.0 * alpha));
}

WeakFormTerms weak_form_terms(const Trajectory& trajectory, const TestFunction& phi, const KernelParams& params) {
  phi.validate();
  const auto& snaps = trajectory.snapshots;
  if (snaps.size() < 2) throw std::invalid_argument("weak form needs at least two snapshots");
  if (std::abs(snaps.front().time) > 1e-14) throw std::invalid_argument("weak form trajectory must start at t = 0");
  if (snaps.back().time < phi.t_support * (1.0 - 1e-12))
    throw std::invalid_argument("test function time support extends beyond the trajectory");

  WeakFormTerms out;
  out.initial = domain_integral(snaps.front().curve, [&](Vec2 x) { return phi.value(x, 0.0); });

  std::vector<double> slice(snaps.size(), 0.0);
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    const double t = snaps[k].time;
    if (t >= phi.t_support) break;
    const auto& curve = snaps[k].curve;
    const auto geo = geometry(curve);
    slice[k] = domain_integral(curve, [&](Vec2 x) {
      double val = phi.dt(x, t);
      const Vec2 grad = phi.gradient(x, t);
      if (grad.x != 0.0 || grad.y != 0.0) val += dot(interior_velocity(curve, geo, params, x), grad);
      return val;
    });
  }
  for (std::size_t k = 0; k + 1 < snaps.size(); ++k)
    out.space_time += 0.5 * (snaps[k + 1].time - snaps[k].time) * (slice[k] + slice[k + 1]);
  out.residual = std::abs(out.initial + out.space_time);
  return out;
}

double weak_form_residual(const Trajectory& trajectory, const TestFunction& phi, const KernelParams& params) {
  return weak_form_terms(trajectory, phi, params).residual;
}

}  // namespace alpha_patch
