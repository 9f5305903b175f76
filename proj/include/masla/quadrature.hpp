#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace masla {

// Romberg integration: trapezoid sums on successively halved grids with
// Richardson extrapolation, stopped when two successive estimates agree to
// rel_tol. Smooth integrands only; callers split at kinks first.
template <class F>
double romberg(F&& f, double a, double b, double rel_tol = 1e-11, int max_level = 18) {
  if (a == b) return 0.0;
  std::vector<double> row(static_cast<std::size_t>(max_level) + 1, 0.0);
  double h = b - a;
  row[0] = 0.5 * h * (f(a) + f(b));
  double prev = row[0];
  for (int k = 1; k <= max_level; ++k) {
    h *= 0.5;
    double s = 0.0;
    const std::int64_t n = std::int64_t(1) << (k - 1);
    for (std::int64_t i = 0; i < n; ++i) s += f(a + (2 * i + 1) * h);
    double cur = 0.5 * row[0] + h * s;
    double pow4 = 1.0;
    for (int j = 1; j <= k; ++j) {
      pow4 *= 4.0;
      const double next = cur + (cur - row[j - 1]) / (pow4 - 1.0);
      row[j - 1] = cur;
      cur = next;
    }
    row[k] = cur;
    if (k >= 3 && std::abs(cur - prev) <= rel_tol * (std::abs(cur) + 1e-300)) return cur;
    prev = cur;
  }
  return row[max_level];
}

// Integrate f over [a, b], splitting at the sorted breakpoints that fall
// strictly inside the interval.
template <class F>
double integrate_split(F&& f, double a, double b, const std::vector<double>& breaks,
                       double rel_tol = 1e-11) {
  double total = 0.0;
  double left = a;
  for (double c : breaks) {
    if (c > left && c < b) {
      total += romberg(f, left, c, rel_tol);
      left = c;
    }
  }
  total += romberg(f, left, b, rel_tol);
  return total;
}

}  // namespace masla
