#pragma once

#include <alpha_patch/lemma_lab.hpp>

namespace test_support {

inline alpha_patch::ClosedCurve circle(std::size_t n, double radius = 1.0) {
  alpha_patch::TestCurveParams p;
  p.n = n;
  p.radius = radius;
  return alpha_patch::generate_test_curve(alpha_patch::CurveKind::circle, p);
}

inline alpha_patch::ClosedCurve ellipse(std::size_t n, double a = 2.0, double b = 1.0) {
  alpha_patch::TestCurveParams p;
  p.n = n;
  p.a = a;
  p.b = b;
  return alpha_patch::generate_test_curve(alpha_patch::CurveKind::ellipse, p);
}

inline alpha_patch::ClosedCurve star(std::size_t n, int lobes = 5, double amp = 0.3) {
  alpha_patch::TestCurveParams p;
  p.n = n;
  p.lobes = lobes;
  p.amp = amp;
  return alpha_patch::generate_test_curve(alpha_patch::CurveKind::star, p);
}

inline double max_abs_diff(alpha_patch::Vec2 a, alpha_patch::Vec2 b) {
  return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

}  // namespace test_support
