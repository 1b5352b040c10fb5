#include "alpha_patch/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "alpha_patch/fit.hpp"
#include "alpha_patch/spectral.hpp"

namespace alpha_patch {

std::string_view to_string(DiffScheme scheme) {
  return scheme == DiffScheme::spectral ? "spectral" : "fd4";
}

DiffScheme diff_scheme_from_string(std::string_view name) {
  if (name == "spectral") return DiffScheme::spectral;
  if (name == "fd4") return DiffScheme::fd4;
  throw std::invalid_argument("unknown differentiation scheme '" + std::string(name) + "'");
}

namespace {

// Orientation of the triangle (a, b, c): >0 counterclockwise.
double orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross(b - a, c - a); }

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const double d1 = orient(q1, q2, p1);
  const double d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1);
  const double d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

ScalarField fd4_derivative(std::span<const double> f, int order) {
  const std::size_t n = f.size();
  const double h = kTwoPi / static_cast<double>(n);
  ScalarField out(n);
  auto at = [&](std::size_t j, long off) {
    return f[static_cast<std::size_t>((static_cast<long>(j) + off + static_cast<long>(n)) % static_cast<long>(n))];
  };
  for (std::size_t j = 0; j < n; ++j) {
    if (order == 1) {
      out[j] = (-at(j, 2) + 8.0 * at(j, 1) - 8.0 * at(j, -1) + at(j, -2)) / (12.0 * h);
    } else {
      out[j] = (-at(j, 2) + 16.0 * at(j, 1) - 30.0 * f[j] + 16.0 * at(j, -1) - at(j, -2)) / (12.0 * h * h);
    }
  }
  return out;
}

}  // namespace

bool is_simple_polygon(std::span<const Vec2> nodes) {
  const std::size_t n = nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = nodes[i];
    const Vec2& b = nodes[(i + 1) % n];
    const double minx = std::min(a.x, b.x), maxx = std::max(a.x, b.x);
    const double miny = std::min(a.y, b.y), maxy = std::max(a.y, b.y);
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the wrap
      const Vec2& c = nodes[j];
      const Vec2& d = nodes[(j + 1) % n];
      if (std::max(c.x, d.x) < minx || std::min(c.x, d.x) > maxx || std::max(c.y, d.y) < miny ||
          std::min(c.y, d.y) > maxy)
        continue;
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

ClosedCurve ClosedCurve::create(VectorField nodes, DiffScheme scheme) {
  const std::size_t n = nodes.size();
  if (n < 16) throw std::invalid_argument("ClosedCurve: need at least 16 nodes, got " + std::to_string(n));
  for (const auto& p : nodes)
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw std::invalid_argument("ClosedCurve: non-finite node");
  for (std::size_t j = 0; j < n; ++j)
    if (norm(nodes[(j + 1) % n] - nodes[j]) < 1e-12)
      throw std::invalid_argument("ClosedCurve: coincident consecutive nodes at index " + std::to_string(j));
  if (signed_area(nodes) <= 0.0)
    throw std::invalid_argument("ClosedCurve: nodes must be ordered counterclockwise (signed area <= 0)");
  if (!is_simple_polygon(nodes)) throw std::invalid_argument("ClosedCurve: curve self-intersects");
  ClosedCurve curve(std::move(nodes), scheme);
  const auto d1 = differentiate(curve, 1);
  for (std::size_t j = 0; j < n; ++j)
    if (norm(d1[j]) < 1e-10)
      throw std::invalid_argument("ClosedCurve: degenerate parameterization at index " + std::to_string(j));
  return curve;
}

ClosedCurve ClosedCurve::unchecked(VectorField nodes, DiffScheme scheme) {
  return ClosedCurve(std::move(nodes), scheme);
}

ScalarField differentiate(std::span<const double> samples, int order, DiffScheme scheme) {
  if (order != 1 && order != 2) throw std::invalid_argument("differentiate: order must be 1 or 2");
  if (samples.size() < 5) throw std::invalid_argument("differentiate: fewer samples than the stencil width");
  return scheme == DiffScheme::spectral ? spectral::derivative(samples, order) : fd4_derivative(samples, order);
}

VectorField differentiate(const ClosedCurve& curve, int order) {
  const std::size_t n = curve.size();
  ScalarField xs(n), ys(n);
  for (std::size_t j = 0; j < n; ++j) {
    xs[j] = curve[j].x;
    ys[j] = curve[j].y;
  }
  const auto dx = differentiate(xs, order, curve.scheme());
  const auto dy = differentiate(ys, order, curve.scheme());
  VectorField out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = {dx[j], dy[j]};
  return out;
}

GeometryFields geometry(const ClosedCurve& curve) {
  const auto d1 = differentiate(curve, 1);
  const auto d2 = differentiate(curve, 2);
  const std::size_t n = curve.size();
  GeometryFields geo;
  geo.g.resize(n);
  geo.T.resize(n);
  geo.Nrm.resize(n);
  geo.kappa.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double g = norm(d1[j]);
    if (!(g >= 1e-10)) throw std::runtime_error("geometry: degenerate metric at node " + std::to_string(j));
    geo.g[j] = g;
    geo.T[j] = d1[j] / g;
    geo.Nrm[j] = -perp(geo.T[j]);
    geo.kappa[j] = cross(d1[j], d2[j]) / (g * g * g);
  }
  return geo;
}

double total_length(const ClosedCurve& curve) {
  const auto d1 = differentiate(curve, 1);
  double sum = 0.0;
  for (const auto& d : d1) sum += norm(d);
  return sum * curve.label_spacing();
}

double signed_area(std::span<const Vec2> nodes) {
  const std::size_t n = nodes.size();
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) sum += cross(nodes[j], nodes[(j + 1) % n]);
  return 0.5 * sum;
}

double enclosed_area(const ClosedCurve& curve) {
  const auto d1 = differentiate(curve, 1);
  double sum = 0.0;
  for (std::size_t j = 0; j < curve.size(); ++j) sum += cross(curve[j], d1[j]);
  return 0.5 * sum * curve.label_spacing();
}

double min_node_spacing(std::span<const Vec2> nodes) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < nodes.size(); ++j) m = std::min(m, norm(nodes[(j + 1) % nodes.size()] - nodes[j]));
  return m;
}

double metric_deviation(const ClosedCurve& curve) {
  const auto d1 = differentiate(curve, 1);
  double mean = 0.0;
  for (const auto& d : d1) mean += norm(d);
  mean /= static_cast<double>(d1.size());
  double dev = 0.0;
  for (const auto& d : d1) dev = std::max(dev, std::abs(norm(d) - mean));
  return dev / mean;
}

ClosedCurve resample(const ClosedCurve& curve, std::size_t n) {
  spectral::CurveInterpolant interp(curve.nodes());
  return ClosedCurve::create(interp.resample(n), curve.scheme());
}

ScalarField arc_length_labels(const ClosedCurve& curve) {
  const std::size_t n = curve.size();
  const double h = curve.label_spacing();

  ScalarField g(n);
  const auto d1 = differentiate(curve, 1);
  for (std::size_t j = 0; j < n; ++j) {
    g[j] = norm(d1[j]);
    if (!(g[j] > 0.0)) throw std::runtime_error("arc_length_reparameterize: non-monotone arc-length map");
  }
  const spectral::TrigInterpolant metric(g);
  const double length = kTwoPi * metric.mean();

  // Trapezoid table of the arc-length map at the nodes, used for initial guesses.
  ScalarField cumulative(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) cumulative[j + 1] = cumulative[j] + 0.5 * h * (g[j] + g[(j + 1) % n]);
  const double scale = length / cumulative[n];
  for (auto& c : cumulative) c *= scale;

  ScalarField labels(n, 0.0);
  std::size_t seg = 0;
  for (std::size_t k = 1; k < n; ++k) {
    const double target = length * static_cast<double>(k) / static_cast<double>(n);
    while (seg + 1 < n && cumulative[seg + 1] < target) ++seg;
    const double frac = (target - cumulative[seg]) / (cumulative[seg + 1] - cumulative[seg]);
    double x = h * (static_cast<double>(seg) + frac);
    for (int it = 0; it < 50; ++it) {
      const double speed = metric.value(x);
      if (!(speed > 0.0)) throw std::runtime_error("arc_length_reparameterize: non-monotone arc-length map");
      const double dx = (metric.integral_from_zero(x) - target) / speed;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    labels[k] = x;
  }
  return labels;
}

ClosedCurve arc_length_reparameterize(const ClosedCurve& curve) {
  const auto labels = arc_length_labels(curve);
  spectral::CurveInterpolant interp(curve.nodes());
  VectorField out(curve.size());
  out[0] = curve[0];
  for (std::size_t k = 1; k < labels.size(); ++k) out[k] = interp.position(labels[k]);
  return ClosedCurve::create(std::move(out), curve.scheme());
}

long periodic_offset(long i, long j, long n) {
  long d = (i - j) % n;
  if (d < 0) d += n;
  if (d > n / 2) d -= n;
  return d;
}

ScalarField periodic_maximal_function(std::span<const double> samples, double period) {
  if (samples.empty()) throw std::invalid_argument("periodic_maximal_function: empty input");
  if (!(period > 0.0)) throw std::invalid_argument("periodic_maximal_function: period must be positive");
  const long n = static_cast<long>(samples.size());
  ScalarField prefix(static_cast<std::size_t>(n) + 1, 0.0);
  for (long j = 0; j < n; ++j) prefix[j + 1] = prefix[j] + std::abs(samples[j]);
  const double total = prefix[n];
  // Periodic extension of the prefix table to any integer index.
  auto cumulative = [&](long idx) {
    long q = idx / n;
    long r = idx % n;
    if (r < 0) {
      r += n;
      --q;
    }
    return static_cast<double>(q) * total + prefix[r];
  };
  ScalarField out(samples.size());
  for (long j = 0; j < n; ++j) {
    // m = 0 is |f_j| itself; taking it directly keeps 𝓜f ≥ |f| exact under rounding.
    double best = std::abs(samples[j]);
    for (long m = 1; m < 2 * n; ++m) {
      const double avg = (cumulative(j + m + 1) - cumulative(j - m)) / static_cast<double>(2 * m + 1);
      best = std::max(best, avg);
    }
    out[j] = best;
  }
  return out;
}

namespace {

template <typename Diff>
double holder_impl(std::size_t n, double period, double beta, Diff diff) {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("holder_seminorm: exponent must lie in (0, 1]");
  const double h = period / static_cast<double>(n);
  double best = 0.0;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, diff(i, (i + k) % n));
    best = std::max(best, m / std::pow(static_cast<double>(k) * h, beta));
  }
  return best;
}

}  // namespace

double holder_seminorm(std::span<const double> samples, double period, double beta) {
  return holder_impl(samples.size(), period, beta,
                     [&](std::size_t i, std::size_t j) { return std::abs(samples[i] - samples[j]); });
}

double holder_seminorm(std::span<const Vec2> samples, double period, double beta) {
  return holder_impl(samples.size(), period, beta,
                     [&](std::size_t i, std::size_t j) { return norm(samples[i] - samples[j]); });
}

double empirical_holder_exponent(std::span<const Vec2> samples, double period) {
  const long n = static_cast<long>(samples.size());
  if (n < 16) throw std::invalid_argument("empirical_holder_exponent: need at least 16 samples");
  const auto offsets = n >= 256 ? log_spaced_offsets(8, n / 16, 12) : log_spaced_offsets(1, n / 8, 12);
  const double h = period / static_cast<double>(n);
  std::vector<double> xs, ys;
  for (long k : offsets) {
    double m = 0.0;
    for (long i = 0; i < n; ++i) m = std::max(m, norm(samples[i] - samples[(i + k) % n]));
    if (m <= 1e-13) continue;
    xs.push_back(static_cast<double>(k) * h);
    ys.push_back(m);
  }
  if (xs.size() < 2) return 1.0;
  return fit_loglog(xs, ys).slope;
}

double lp_norm(std::span<const double> samples, double spacing, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : samples) m = std::max(m, std::abs(v));
    return m;
  }
  double sum = 0.0;
  for (double v : samples) sum += std::pow(std::abs(v), p);
  return std::pow(sum * spacing, 1.0 / p);
}

NormReport curve_norms(const ClosedCurve& arc_length_curve, double beta, double p) {
  const auto geo = geometry(arc_length_curve);
  const double length = total_length(arc_length_curve);
  NormReport r;
  r.holder_exponent = beta;
  r.holder_seminorm = holder_seminorm(geo.T, length, beta);
  r.sobolev_p = p;
  r.sobolev_seminorm = lp_norm(geo.kappa, length / static_cast<double>(arc_length_curve.size()), p);
  return r;
}

const std::array<std::string_view, ArcLengthEstimateReport::kCount> ArcLengthEstimateReport::kIds = {
    "2.2a", "2.2b", "2.2c", "2.2d", "2.2e", "2.3a", "2.3b", "2.3c", "2.3d"};

ArcLengthEstimateReport verify_arc_length_estimates(const ClosedCurve& curve, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("verify_arc_length_estimates: p must exceed 1");
  if (metric_deviation(curve) > 1e-6)
    throw std::invalid_argument("verify_arc_length_estimates: curve is not arc-length parameterized");

  const auto geo = geometry(curve);
  const long n = static_cast<long>(curve.size());
  const double length = total_length(curve);
  const double h = length / static_cast<double>(n);
  // κ is per unit arc length; the metric is constant so the label grid is uniform in s.
  const auto max_kappa = periodic_maximal_function(geo.kappa, length);
  const double beta = std::isinf(p) ? 1.0 : 1.0 - 1.0 / p;

  ArcLengthEstimateReport rep;
  rep.p = p;
  rep.beta = beta;
  rep.predicted_exponents = {2 * beta, 1 + beta, 2 * beta, 2 * beta, 1 + 2 * beta, 1.0, 2.0, 1 + beta, 2 + beta};
  rep.constants.fill(0.0);

  double radius = 0.0;
  for (long i = 0; i < n; ++i) radius = std::max(radius, norm(curve[i]));
  const double eR = 64 * std::numeric_limits<double>::epsilon() * radius;
  const double eT = 8 * std::numeric_limits<double>::epsilon() * static_cast<double>(n);

  const long kfit = std::max(2L, n / 32);
  std::vector<std::array<double, ArcLengthEstimateReport::kCount>> lhs_by_offset(
      static_cast<std::size_t>(kfit) + 1);
  for (auto& a : lhs_by_offset) a.fill(0.0);

  for (long i = 0; i < n; ++i) {
    const Vec2& gi = curve[i];
    const Vec2& Ti = geo.T[i];
    const Vec2& Ni = geo.Nrm[i];
    const double mk = max_kappa[i];
    for (long j = 0; j < n; ++j) {
      if (j == i) continue;
      const long off = periodic_offset(i, j, n);
      const double u = static_cast<double>(off) * h;
      const double au = std::abs(u);
      const Vec2 d = gi - curve[j];
      const Vec2 dT = Ti - geo.T[j];
      const std::array<double, ArcLengthEstimateReport::kCount> raw = {
          std::abs(dot(Ti, geo.T[j]) - 1.0),
          std::abs(dot(d, Ni)),
          std::abs(dot(dT, Ti)),
          std::abs(au / norm(d) - 1.0),
          std::abs(dot(d, Ti) - u),
          std::abs(dot(geo.T[j], Ni)),
          std::abs(dot(d, Ni)),
          std::abs(dot(Ti, dT)),
          std::abs(dot(d, dT)),
      };
      // Rounding level of each left-hand side, propagated from the node error eR and
      // the spectral tangent error eT (about N·eps); values below it count as zeros.
      const double nd = norm(d);
      const std::array<double, ArcLengthEstimateReport::kCount> noise = {
          eT, eR + nd * eT, eT, eR / nd, eR + nd * eT, eT, eR + nd * eT, eT, eR * norm(dT) + nd * eT,
      };
      std::array<double, ArcLengthEstimateReport::kCount> lhs = raw;
      for (std::size_t e = 0; e < ArcLengthEstimateReport::kCount; ++e)
        if (lhs[e] <= noise[e]) lhs[e] = 0.0;
      const std::array<double, ArcLengthEstimateReport::kCount> rhs = {
          std::pow(au, 2 * beta),      std::pow(au, 1 + beta),      std::pow(au, 2 * beta),
          std::pow(au, 2 * beta),      std::pow(au, 1 + 2 * beta),  mk * au,
          mk * au * au,                mk * std::pow(au, 1 + beta), mk * std::pow(au, 2 + beta),
      };
      for (std::size_t e = 0; e < ArcLengthEstimateReport::kCount; ++e) {
        double ratio = 0.0;
        if (rhs[e] > 0.0) {
          ratio = lhs[e] / rhs[e];
        } else if (lhs[e] > 0.0) {
          ratio = std::numeric_limits<double>::infinity();
        }
        rep.constants[e] = std::max(rep.constants[e], ratio);
      }
      const long aoff = std::abs(off);
      if (aoff <= kfit)
        for (std::size_t e = 0; e < ArcLengthEstimateReport::kCount; ++e)
          lhs_by_offset[aoff][e] = std::max(lhs_by_offset[aoff][e], lhs[e]);
    }
  }

  for (std::size_t e = 0; e < ArcLengthEstimateReport::kCount; ++e) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (long k = 1; k <= kfit; ++k) {
      const double v = lhs_by_offset[k][e];
      if (v == 0.0) continue;
      const double lx = std::log(static_cast<double>(k) * h);
      const double ly = std::log(v);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++count;
    }
    if (count >= 2) {
      rep.fitted_exponents[e] = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    } else {
      // The quantity vanishes to rounding at every short distance.
      rep.fitted_exponents[e] = std::numeric_limits<double>::infinity();
    }
  }
  return rep;
}

}  // namespace alpha_patch
