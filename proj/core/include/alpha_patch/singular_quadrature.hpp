#pragma once

namespace alpha_patch::quadrature {

/// Locally corrected trapezoid rules for periodic integrands with a |u|^{-a}
/// singularity at one node, 0 < a < 1.
///
/// For F(u) = |u|^{-a} φ(u) with φ smooth, the punctured sum h Σ_{k≠0} F(kh)
/// misses the integral by the generalized Euler–Maclaurin (Navot) series
///   −2 h^{1−a} [ζ(a) φ(0) + ζ(a−2) φ''(0) h²/2! + ζ(a−4) φ''''(0) h⁴/4! + …],
/// which only involves the even part of φ at the singular node. The corrections
/// below estimate those even-part coefficients from the nearest grid samples.
/// A symmetric principal value reduces to the same form after pairing ±kh,
/// because the odd leading part of the kernel cancels in each pair.
class SingularCorrection {
 public:
  explicit SingularCorrection(double a);

  [[nodiscard]] double exponent() const { return a_; }

  /// Term to add to h Σ_{k≠0} F(kh) for a weakly singular integrand with known
  /// φ(0) = phi0. phi_e1, phi_e2 are the even parts (φ(±h), φ(±2h) averaged),
  /// where φ(u) = |u|^a F(u).
  template <typename V>
  [[nodiscard]] V weakly_singular(double h, const V& phi0, const V& phi_e1, const V& phi_e2) const {
    const V d1 = phi_e1 - phi0;
    const V d2 = phi_e2 - phi0;
    const V c4 = (d2 - 4.0 * d1) * (1.0 / 12.0);  // φ''''(0) h⁴ / 4!
    const V c2 = d1 - c4;                         // φ''(0) h² / 2!
    return (-2.0 * scale(h)) * (zeta0_ * phi0 + zeta2_ * c2 + zeta4_ * c4);
  }

  /// Term to add to the symmetric punctured sum h Σ_{k≠0} F(kh) of a principal
  /// value integrand F ~ sign(u)|u|^{-1-a}. chi_k = (kh)^a (F(kh) + F(−kh)) / 2
  /// for k = 1, 2, 3; χ(0) is extrapolated in u².
  template <typename V>
  [[nodiscard]] V principal_value(double h, const V& chi1, const V& chi2, const V& chi3) const {
    const V c4 = (3.0 * chi3 - 8.0 * chi2 + 5.0 * chi1) * (1.0 / 120.0);
    const V c2 = (chi2 - chi1 - 15.0 * c4) * (1.0 / 3.0);
    const V chi0 = chi1 - c2 - c4;
    return (-2.0 * scale(h)) * (zeta0_ * chi0 + zeta2_ * c2 + zeta4_ * c4);
  }

  /// Leading part of the principal-value correction, −2ζ(a)h^{1−a}χ(0).
  template <typename V>
  [[nodiscard]] V principal_value_leading(double h, const V& chi1, const V& chi2, const V& chi3) const {
    const V chi0 = 1.5 * chi1 - 0.6 * chi2 + 0.1 * chi3;
    return (-2.0 * scale(h) * zeta0_) * chi0;
  }

  [[nodiscard]] double zeta0() const { return zeta0_; }
  [[nodiscard]] double zeta2() const { return zeta2_; }
  [[nodiscard]] double zeta4() const { return zeta4_; }

 private:
  [[nodiscard]] double scale(double h) const;

  double a_;
  double zeta0_;
  double zeta2_;
  double zeta4_;
};

}  // namespace alpha_patch::quadrature
