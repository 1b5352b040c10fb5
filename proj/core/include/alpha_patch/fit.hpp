#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace alpha_patch {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual of the fit.
  double rms = 0.0;
};

/// Ordinary least squares y ≈ intercept + slope·x. Throws std::invalid_argument
/// for fewer than two points or a degenerate abscissa.
LineFit fit_line(std::span<const double> xs, std::span<const double> ys);

/// Least-squares line through (log x, log y).
LineFit fit_loglog(std::span<const double> xs, std::span<const double> ys);

/// Up to `count` distinct integers in [lo, hi], geometrically spaced, ascending.
std::vector<long> log_spaced_offsets(long lo, long hi, std::size_t count);

}  // namespace alpha_patch
