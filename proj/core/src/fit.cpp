#include "alpha_patch/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace alpha_patch {

LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("fit_line: size mismatch");
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("fit_line: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_line: abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (f.intercept + f.slope * xs[i]);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / static_cast<double>(n));
  return f;
}

LineFit fit_loglog(std::span<const double> xs, std::span<const double> ys) {
  std::vector<double> lx(xs.size()), ly(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) lx[i] = std::log(xs[i]);
  for (std::size_t i = 0; i < ys.size(); ++i) ly[i] = std::log(ys[i]);
  return fit_line(lx, ly);
}

std::vector<long> log_spaced_offsets(long lo, long hi, std::size_t count) {
  if (lo < 1 || hi < lo || count == 0) throw std::invalid_argument("log_spaced_offsets: bad range");
  std::vector<long> out;
  if (count == 1 || lo == hi) return {lo};
  const double ratio = std::log(static_cast<double>(hi) / static_cast<double>(lo));
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    const long k = std::lround(static_cast<double>(lo) * std::exp(ratio * t));
    if (out.empty() || k > out.back()) out.push_back(k);
  }
  return out;
}

}  // namespace alpha_patch
