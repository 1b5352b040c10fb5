#include "alpha_patch/lemma_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "alpha_patch/fit.hpp"
#include "alpha_patch/singular_quadrature.hpp"
#include "alpha_patch/spectral.hpp"

namespace alpha_patch {

std::string_view to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::circle:
      return "circle";
    case CurveKind::ellipse:
      return "ellipse";
    case CurveKind::star:
      return "star";
    case CurveKind::rough_c1beta:
      return "rough_c1beta";
    case CurveKind::w2p_spike:
      return "w2p_spike";
  }
  return "circle";
}

CurveKind curve_kind_from_string(std::string_view name) {
  for (auto k : {CurveKind::circle, CurveKind::ellipse, CurveKind::star, CurveKind::rough_c1beta,
                 CurveKind::w2p_spike})
    if (name == to_string(k)) return k;
  throw std::invalid_argument("unknown curve kind '" + std::string(name) + "'");
}

ClosedCurve generate_test_curve(CurveKind kind, const TestCurveParams& p) {
  const std::size_t n = p.n;
  if (n < 16) throw std::invalid_argument("test curve needs at least 16 nodes");
  std::vector<double> radius(n, 1.0);
  VectorField nodes(n);
  auto theta = [&](std::size_t j) { return kTwoPi * static_cast<double>(j) / static_cast<double>(n); };

  switch (kind) {
    case CurveKind::circle:
      if (!(p.radius > 0.0)) throw std::invalid_argument("circle radius must be positive");
      for (std::size_t j = 0; j < n; ++j) radius[j] = p.radius;
      break;
    case CurveKind::ellipse:
      if (!(p.a > 0.0 && p.b > 0.0)) throw std::invalid_argument("ellipse semi-axes must be positive");
      for (std::size_t j = 0; j < n; ++j) nodes[j] = {p.a * std::cos(theta(j)), p.b * std::sin(theta(j))};
      return ClosedCurve::create(std::move(nodes), p.scheme);
    case CurveKind::star:
      if (p.lobes < 1 || !(std::abs(p.amp) < 1.0)) throw std::invalid_argument("star needs lobes ≥ 1 and |amp| < 1");
      for (std::size_t j = 0; j < n; ++j) radius[j] = 1.0 + p.amp * std::cos(p.lobes * theta(j));
      break;
    case CurveKind::rough_c1beta: {
      if (!(p.beta0 > 0.0 && p.beta0 < 1.0)) throw std::invalid_argument("rough_c1beta needs 0 < beta0 < 1");
      // Phases from the raw engine output so the curve is identical on every platform.
      if (!(p.lacunarity > 1.0)) throw std::invalid_argument("rough_c1beta needs lacunarity > 1");
      std::mt19937_64 rng(p.seed);
      double last = 0.0;
      for (double q = p.lacunarity;; q *= p.lacunarity) {
        const double freq = std::round(q);
        if (freq > static_cast<double>(n / 8)) break;
        if (freq < 2.0 || freq == last) continue;
        last = freq;
        const double phase = kTwoPi * static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double weight = std::pow(freq, -(1.0 + p.beta0));
        for (std::size_t j = 0; j < n; ++j) radius[j] += p.rough_amp * weight * std::cos(freq * theta(j) + phase);
      }
      break;
    }
    case CurveKind::w2p_spike: {
      if (!(p.p0 > 1.0)) throw std::invalid_argument("w2p_spike needs p0 > 1");
      const double a = 1.0 / p.p0 - 0.01;
      if (!(a > 0.0)) throw std::invalid_argument("w2p_spike needs p0 < 100");
      for (std::size_t j = 0; j < n; ++j)
        radius[j] = 1.0 + 0.1 * p.strength * std::pow(std::abs(2.0 * std::sin(0.5 * theta(j))), 2.0 - a);
      break;
    }
  }
  for (std::size_t j = 0; j < n; ++j)
    nodes[j] = {radius[j] * std::cos(theta(j)), radius[j] * std::sin(theta(j))};
  return ClosedCurve::create(std::move(nodes), p.scheme);
}

std::vector<long> default_delta_offsets(std::size_t n) {
  const long hi = static_cast<long>(n / 16);
  if (hi < 8) throw std::invalid_argument("default δ grid needs N ≥ 128");
  return log_spaced_offsets(8, hi, 12);
}

namespace {

// Variation below this fraction of the field's magnitude is treated as rounding.
constexpr double kFlatRatio = 1e-11;

struct HolderFit {
  double exponent = 1.0;
  double residual = 0.0;
  double constant = 0.0;
  bool flat = false;
};

template <typename Diff>
HolderFit holder_regression(std::size_t n, double ds, std::span<const long> offsets, std::size_t base_points,
                            double predicted, double magnitude, Diff diff) {
  if (offsets.size() < 2) throw std::invalid_argument("δ grid needs at least two points");
  if (base_points == 0) throw std::invalid_argument("need at least one base point");
  const std::size_t stride = std::max<std::size_t>(1, n / base_points);
  std::vector<double> xs, ys;
  HolderFit out;
  bool any_signal = false;
  for (long m : offsets) {
    if (m < 4) throw std::invalid_argument("δ below 4h");
    if (static_cast<std::size_t>(m) >= n / 2) throw std::invalid_argument("δ beyond half the period");
    double sup = 0.0;
    for (std::size_t b = 0; b < n; b += stride) sup = std::max(sup, diff(b, (b + static_cast<std::size_t>(m)) % n));
    const double delta = static_cast<double>(m) * ds;
    xs.push_back(delta);
    ys.push_back(sup);
    if (sup > kFlatRatio * magnitude) any_signal = true;
  }
  if (!any_signal) {
    // A constant field: Lipschitz, with the exponent saturated at 1.
    out.flat = true;
    out.exponent = 1.0;
    return out;
  }
  for (std::size_t i = 0; i < xs.size(); ++i)
    out.constant = std::max(out.constant, ys[i] / std::pow(xs[i], predicted));
  const LineFit f = fit_loglog(xs, ys);
  out.exponent = f.slope;
  out.residual = f.rms;
  return out;
}

double relative_change(double coarse, double fine, bool coarse_flat, bool fine_flat) {
  if (coarse_flat && fine_flat) return 0.0;
  if (coarse == 0.0) return fine == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(fine - coarse) / std::abs(coarse);
}

std::vector<long> doubled(std::span<const long> offsets) {
  std::vector<long> out(offsets.begin(), offsets.end());
  for (auto& m : out) m *= 2;
  return out;
}

double field_magnitude(std::span<const Vec2> f) {
  double m = 0.0;
  for (const auto& v : f) m = std::max(m, norm(v));
  return m;
}

double field_magnitude(std::span<const double> f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

void require_arc_length(const ClosedCurve& curve, const char* who) {
  if (metric_deviation(curve) > 1e-6) throw std::invalid_argument(std::string(who) + ": curve is not arc-length");
}

struct HolderPair {
  HolderFit vector_fit;
  HolderFit tangential_fit;
};

HolderPair holder_fits(const ClosedCurve& curve, const KernelParams& params, std::span<const long> offsets,
                       std::size_t base_points, double predicted_vector, double predicted_tangential) {
  const auto bv = boundary_velocity(curve, params);
  const std::size_t n = curve.size();
  const double ds = total_length(curve) / static_cast<double>(n);
  HolderPair out;
  // The tangential part is measured against |∂ₛv|: on a circle it vanishes identically
  // and its own maximum is rounding.
  out.vector_fit = holder_regression(n, ds, offsets, base_points, predicted_vector, field_magnitude(bv.dsv),
                                     [&](std::size_t i, std::size_t j) { return norm(bv.dsv[j] - bv.dsv[i]); });
  out.tangential_fit =
      holder_regression(n, ds, offsets, base_points, predicted_tangential, field_magnitude(bv.dsv),
                        [&](std::size_t i, std::size_t j) { return std::abs(bv.dsv_T[j] - bv.dsv_T[i]); });
  return out;
}

}  // namespace

EstimateReport verify_dsv_holder(const ClosedCurve& curve, const KernelParams& params, double beta,
                                 const HolderOptions& options) {
  require_arc_length(curve, "verify_dsv_holder");
  const auto offsets = options.delta_offsets.empty() ? default_delta_offsets(curve.size()) : options.delta_offsets;
  EstimateReport rep;
  rep.estimate_id = "L3.2-holder";
  rep.alpha = params.alpha();
  rep.beta_or_p = beta;
  rep.predicted_exponent = beta - params.singular_exponent();
  rep.in_hypothesis = rep.predicted_exponent > 0.0;
  const auto coarse = holder_fits(curve, params, offsets, options.base_points, rep.predicted_exponent, 0.0);
  rep.fitted_exponent = coarse.vector_fit.exponent;
  rep.fit_residual = coarse.vector_fit.residual;
  rep.empirical_constant = coarse.vector_fit.constant;
  rep.flagged = rep.fit_residual > 0.05;
  rep.refinement_stability = std::numeric_limits<double>::quiet_NaN();
  if (options.refine) {
    const auto fine_offsets = doubled(offsets);
    const auto fine = holder_fits(resample(curve, 2 * curve.size()), params, fine_offsets,
                                  options.base_points, rep.predicted_exponent, 0.0);
    rep.refinement_stability = relative_change(coarse.vector_fit.constant, fine.vector_fit.constant,
                                               coarse.vector_fit.flat, fine.vector_fit.flat);
  }
  return rep;
}

EstimateReport verify_dsvT_holder(const ClosedCurve& curve, const KernelParams& params, double p,
                                  const HolderOptions& options) {
  require_arc_length(curve, "verify_dsvT_holder");
  if (!(p > 1.0)) throw std::invalid_argument("verify_dsvT_holder: p must exceed 1");
  const auto offsets = options.delta_offsets.empty() ? default_delta_offsets(curve.size()) : options.delta_offsets;
  EstimateReport rep;
  rep.estimate_id = "L4.2-holder";
  rep.alpha = params.alpha();
  rep.beta_or_p = p;
  rep.predicted_exponent = std::isinf(p) ? 1.0 : 1.0 - 1.0 / p;
  rep.in_hypothesis = p > 1.0 / (1.0 - params.singular_exponent());
  const double predicted_vector = rep.predicted_exponent - params.singular_exponent();
  const auto coarse = holder_fits(curve, params, offsets, options.base_points, predicted_vector, rep.predicted_exponent);
  rep.fitted_exponent = coarse.tangential_fit.exponent;
  rep.fit_residual = coarse.tangential_fit.residual;
  rep.empirical_constant = coarse.tangential_fit.constant;
  rep.contrast_exponent = coarse.vector_fit.exponent;
  rep.flagged = rep.fit_residual > 0.05;
  rep.refinement_stability = std::numeric_limits<double>::quiet_NaN();
  if (options.refine) {
    const auto fine_offsets = doubled(offsets);
    const auto fine = holder_fits(resample(curve, 2 * curve.size()), params, fine_offsets, options.base_points,
                                  predicted_vector, rep.predicted_exponent);
    rep.refinement_stability = relative_change(coarse.tangential_fit.constant, fine.tangential_fit.constant,
                                               coarse.tangential_fit.flat, fine.tangential_fit.flat);
  }
  return rep;
}

namespace {

// Scalar PV integrand of ∂ₛv·T at label x, offset k: T(y)·T(x) [(γ(x)−γ(y))·T(x)] g(y) / |γ(x)−γ(y)|^{2+2α}.
double dsvT_integrand(const ClosedCurve& c, const GeometryFields& geo, double alpha, std::size_t x, long k) {
  const long n = static_cast<long>(c.size());
  const std::size_t y = static_cast<std::size_t>(((static_cast<long>(x) + k) % n + n) % n);
  const Vec2 d = c[x] - c[y];
  const double d2 = dot(d, d);
  return dot(geo.T[y], geo.T[x]) * dot(d, geo.T[x]) * geo.g[y] * std::pow(d2, -1.0 - alpha);
}

// Symmetric punctured window sum over 0 < |k| ≤ w with the singular correction.
double near_window(const ClosedCurve& c, const GeometryFields& geo, const KernelParams& params, std::size_t x,
                   long w) {
  const double h = c.label_spacing();
  const double a = params.singular_exponent();
  double sum = 0.0;
  double chi[4] = {0.0, 0.0, 0.0, 0.0};
  for (long k = 1; k <= w; ++k) {
    const double pair = dsvT_integrand(c, geo, params.alpha(), x, k) + dsvT_integrand(c, geo, params.alpha(), x, -k);
    sum += pair;
    if (k <= 3) chi[k] = 0.5 * pair * std::pow(static_cast<double>(k) * h, a);
  }
  const quadrature::SingularCorrection corr(a);
  return sum * h + corr.principal_value(h, chi[1], chi[2], chi[3]);
}

}  // namespace

SplitResult split_I1_I2(const ClosedCurve& curve, const KernelParams& params, std::size_t s_index, long m,
                        double p) {
  require_arc_length(curve, "split_I1_I2");
  const std::size_t n = curve.size();
  const long ln = static_cast<long>(n);
  if (s_index >= n) throw std::out_of_range("split_I1_I2: node index");
  if (m < 4 || 2 * m >= ln / 2 || 8 * m > ln) throw std::invalid_argument("split_I1_I2: δ must lie in [4h, L/8]");
  if (!(p > 1.0)) throw std::invalid_argument("split_I1_I2: p must exceed 1");

  const auto geo = geometry(curve);
  const std::size_t shifted = (s_index + static_cast<std::size_t>(m)) % n;
  const double h = curve.label_spacing();
  const double alpha = params.alpha();

  SplitResult r;
  r.I1 = near_window(curve, geo, params, shifted, 2 * m) - near_window(curve, geo, params, s_index, 2 * m);
  double far = 0.0;
  for (long k = 2 * m + 1; k <= ln / 2; ++k) {
    const bool antipode = 2 * k == ln;
    far += dsvT_integrand(curve, geo, alpha, shifted, k) - dsvT_integrand(curve, geo, alpha, s_index, k);
    if (!antipode)
      far += dsvT_integrand(curve, geo, alpha, shifted, -k) - dsvT_integrand(curve, geo, alpha, s_index, -k);
  }
  r.I2 = far * h;

  const auto bv = boundary_velocity(curve, geo, params);
  r.delta_dsvT = bv.dsv_T[shifted] - bv.dsv_T[s_index];
  const double delta = static_cast<double>(m) * total_length(curve) / static_cast<double>(n);
  const double sigma = std::isinf(p) ? 1.0 : 1.0 - 1.0 / p;
  r.bound_ratio_1 = std::abs(r.I1) / std::pow(delta, sigma);
  r.bound_ratio_2 = std::abs(r.I2) / std::pow(delta, sigma);
  return r;
}

namespace {

// sup_x |PV∫ a(y)K(y,x)dy| + |PV∫ a(x)K(y,x)dx| on the label grid.
double kernel_lemma_sup(const ClosedCurve& curve, const KernelParams& params, std::span<const double> a) {
  const auto geo = geometry(curve);
  const std::size_t n = curve.size();
  const long ln = static_cast<long>(n);
  const double h = curve.label_spacing();
  const double s = params.singular_exponent();
  const quadrature::SingularCorrection corr(s);
  auto wrap = [&](long j) { return static_cast<std::size_t>((j % ln + ln) % ln); };
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // first: y varies, x = i fixed; second: x varies, y = i fixed.
    auto first = [&](long k) {
      const std::size_t y = wrap(static_cast<long>(i) + k);
      return a[y] * kernel_K(curve[y], geo.g[y], curve[i], geo.T[i], params);
    };
    auto second = [&](long k) {
      const std::size_t x = wrap(static_cast<long>(i) + k);
      return a[x] * kernel_K(curve[i], geo.g[i], curve[x], geo.T[x], params);
    };
    double s1 = 0.0, s2 = 0.0;
    double c1[4] = {0, 0, 0, 0}, c2[4] = {0, 0, 0, 0};
    for (long k = 1; k <= ln / 2; ++k) {
      const bool antipode = 2 * k == ln;
      const double p1 = first(k) + (antipode ? 0.0 : first(-k));
      const double p2 = second(k) + (antipode ? 0.0 : second(-k));
      s1 += p1;
      s2 += p2;
      if (k <= 3) {
        const double w = 0.5 * std::pow(static_cast<double>(k) * h, s);
        c1[k] = p1 * w;
        c2[k] = p2 * w;
      }
    }
    const double v1 = s1 * h + corr.principal_value(h, c1[1], c1[2], c1[3]);
    const double v2 = s2 * h + corr.principal_value(h, c2[1], c2[2], c2[3]);
    best = std::max(best, std::abs(v1) + std::abs(v2));
  }
  return best;
}

double holder_norm(std::span<const double> a, double beta) {
  return field_magnitude(a) + holder_seminorm(a, kTwoPi, beta);
}

}  // namespace

EstimateReport verify_kernel_lemma(const ClosedCurve& curve, const KernelParams& params,
                                   std::span<const double> a_field, double beta, bool refine) {
  require_arc_length(curve, "verify_kernel_lemma");
  if (a_field.size() != curve.size()) throw std::invalid_argument("verify_kernel_lemma: field size mismatch");
  EstimateReport rep;
  rep.estimate_id = "L5.1-pv";
  rep.alpha = params.alpha();
  rep.beta_or_p = beta;
  // The estimate is a uniform bound; there is no exponent to fit.
  rep.fitted_exponent = 0.0;
  rep.predicted_exponent = 0.0;
  rep.in_hypothesis = beta > params.singular_exponent();

  auto ratio = [&](const ClosedCurve& c, std::span<const double> a) {
    const double normv = holder_norm(a, beta);
    if (normv == 0.0) return 0.0;
    return kernel_lemma_sup(c, params, a) / normv;
  };
  rep.empirical_constant = ratio(curve, a_field);
  rep.refinement_stability = std::numeric_limits<double>::quiet_NaN();
  if (refine) {
    const spectral::TrigInterpolant interp(a_field);
    const std::size_t n2 = 2 * curve.size();
    ScalarField a2(n2);
    for (std::size_t j = 0; j < n2; ++j) a2[j] = interp.value(kTwoPi * static_cast<double>(j) / static_cast<double>(n2));
    const double fine = ratio(resample(curve, n2), a2);
    rep.refinement_stability = relative_change(rep.empirical_constant, fine, rep.empirical_constant == 0.0, fine == 0.0);
  }
  return rep;
}

const std::vector<std::string>& estimate_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (auto id : ArcLengthEstimateReport::kIds) v.push_back("L2.2-" + std::string(id));
    v.insert(v.end(), {"L3.2-holder", "L4.2-holder", "L5.1-odd", "L5.1-pv"});
    return v;
  }();
  return ids;
}

std::vector<std::string> select_estimates(std::string_view list) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = list.find(',', pos);
    std::string_view token = list.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (!token.empty()) {
      bool matched = false;
      for (const auto& id : estimate_ids()) {
        const bool hit = id == token || (id.size() > token.size() && id.compare(0, token.size(), token) == 0 &&
                                         id[token.size()] == '-');
        if (hit) {
          matched = true;
          if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
        }
      }
      if (!matched) throw std::invalid_argument("unknown estimate id '" + std::string(token) + "'");
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  // Keep the canonical order regardless of the order requested.
  std::vector<std::string> ordered;
  for (const auto& id : estimate_ids())
    if (std::find(out.begin(), out.end(), id) != out.end()) ordered.push_back(id);
  return ordered;
}

std::vector<EstimateReport> run_estimate_suite(const ClosedCurve& curve, const KernelParams& params,
                                               std::span<const std::string> ids, const SuiteOptions& options) {
  auto wanted = [&](std::string_view id) { return std::find(ids.begin(), ids.end(), id) != ids.end(); };
  std::vector<EstimateReport> out;

  bool any_l22 = false;
  for (auto id : ArcLengthEstimateReport::kIds) any_l22 = any_l22 || wanted("L2.2-" + std::string(id));
  if (any_l22) {
    const auto coarse = verify_arc_length_estimates(curve, options.p);
    std::optional<ArcLengthEstimateReport> fine;
    if (options.holder.refine) fine = verify_arc_length_estimates(resample(curve, 2 * curve.size()), options.p);
    for (std::size_t e = 0; e < ArcLengthEstimateReport::kCount; ++e) {
      const std::string id = "L2.2-" + std::string(ArcLengthEstimateReport::kIds[e]);
      if (!wanted(id)) continue;
      EstimateReport r;
      r.estimate_id = id;
      r.alpha = params.alpha();
      r.beta_or_p = options.p;
      r.fitted_exponent = coarse.fitted_exponents[e];
      r.predicted_exponent = coarse.predicted_exponents[e];
      r.empirical_constant = coarse.constants[e];
      r.refinement_stability = fine ? relative_change(coarse.constants[e], fine->constants[e],
                                                      coarse.constants[e] == 0.0, fine->constants[e] == 0.0)
                                    : std::numeric_limits<double>::quiet_NaN();
      out.push_back(r);
    }
  }
  if (wanted("L3.2-holder")) out.push_back(verify_dsv_holder(curve, params, options.beta, options.holder));
  if (wanted("L4.2-holder")) out.push_back(verify_dsvT_holder(curve, params, options.p, options.holder));
  if (wanted("L5.1-odd")) {
    const auto coarse = kernel_symmetry_check(curve, params, options.beta);
    EstimateReport r;
    r.estimate_id = "L5.1-odd";
    r.alpha = params.alpha();
    r.beta_or_p = options.beta;
    r.predicted_exponent = -1.0 + options.beta - params.singular_exponent();
    // An exactly odd kernel has no defect to fit; report the prediction.
    r.fitted_exponent = coarse.fit_points >= 2 ? coarse.fitted_slope : r.predicted_exponent;
    r.empirical_constant = coarse.constant;
    r.refinement_stability = std::numeric_limits<double>::quiet_NaN();
    if (options.holder.refine) {
      const auto fine = kernel_symmetry_check(resample(curve, 2 * curve.size()), params, options.beta);
      r.refinement_stability =
          relative_change(coarse.constant, fine.constant, coarse.fit_points == 0, fine.fit_points == 0);
    }
    out.push_back(r);
  }
  if (wanted("L5.1-pv")) {
    ScalarField a(curve.size());
    for (std::size_t j = 0; j < a.size(); ++j) a[j] = std::sin(curve.label_spacing() * static_cast<double>(j));
    out.push_back(verify_kernel_lemma(curve, params, a, options.beta, options.holder.refine));
  }
  return out;
}

}  // namespace alpha_patch
