#include "alpha_patch/singular_quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace alpha_patch::quadrature {

SingularCorrection::SingularCorrection(double a)
    : a_(a), zeta0_(std::riemann_zeta(a)), zeta2_(std::riemann_zeta(a - 2.0)), zeta4_(std::riemann_zeta(a - 4.0)) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("SingularCorrection: exponent must lie in (0, 1)");
}

double SingularCorrection::scale(double h) const { return std::pow(h, 1.0 - a_); }

}  // namespace alpha_patch::quadrature
