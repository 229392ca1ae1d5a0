#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "error.hpp"

namespace hfcov {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

namespace detail {

template <class F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth, double& err, bool& ok) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || depth <= 0) {
    if (std::abs(delta) > 15.0 * tol) ok = false;
    err += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, err, ok) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, err, ok);
}

}  // namespace detail

/// Adaptive Simpson on [a, b], split at every breakpoint inside (a, b).
/// Each piece gets a share of `tol` proportional to its length.
template <class F>
QuadResult integrate(const F& f, double a, double b, std::vector<double> breaks = {},
                     double tol = 1e-10, int max_depth = 40) {
  if (b <= a) return {};
  std::vector<double> pts{a};
  std::sort(breaks.begin(), breaks.end());
  for (double p : breaks)
    if (p > a && p < b && p > pts.back()) pts.push_back(p);
  pts.push_back(b);
  QuadResult out;
  bool ok = true;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double lo = pts[i], hi = pts[i + 1];
    // One ulp inside so that step discontinuities at breakpoints take the piece's own side.
    double flo = f(std::nextafter(lo, hi)), fhi = f(std::nextafter(hi, lo));
    double fm = f(0.5 * (lo + hi));
    double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    double piece_tol = tol * (hi - lo) / (b - a);
    out.value += detail::simpson_rec(f, lo, hi, flo, fm, fhi, whole, piece_tol, max_depth,
                                     out.error, ok);
  }
  if (!ok) throw NumericalError("adaptive quadrature did not converge", out.error);
  return out;
}

}  // namespace hfcov
