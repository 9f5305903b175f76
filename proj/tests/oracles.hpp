// Test-only oracles, deliberately independent of the library's own
// algorithms: dense grid search for prox optimality, adaptive Simpson for
// normalization constants, and exhaustive vertex enumeration for tiny
// transportation problems.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracles {

// Iteratively refined dense grid search over a rectangle; final resolution
// below `res`. Returns the best probe point.
inline std::array<double, 2> grid_search_2d(const std::function<double(double, double)>& f,
                                            double lo0, double hi0, double lo1, double hi1,
                                            double res = 1e-5) {
  double a0 = lo0, b0 = hi0, a1 = lo1, b1 = hi1;
  std::array<double, 2> best = {0.5 * (a0 + b0), 0.5 * (a1 + b1)};
  const int n = 100;
  while (true) {
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
      const double x = a0 + (b0 - a0) * i / n;
      for (int j = 0; j <= n; ++j) {
        const double y = a1 + (b1 - a1) * j / n;
        const double v = f(x, y);
        if (v < best_val) {
          best_val = v;
          best = {x, y};
        }
      }
    }
    const double h0 = (b0 - a0) / n, h1 = (b1 - a1) / n;
    if (h0 < res && h1 < res) return best;
    a0 = best[0] - 2 * h0;
    b0 = best[0] + 2 * h0;
    a1 = best[1] - 2 * h1;
    b1 = best[1] + 2 * h1;
  }
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-10) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Exhaustive minimum over the vertices of the transportation polytope for
// m, n <= 3: every basis is a spanning tree with m+n-1 arcs; flows follow by
// leaf stripping, infeasible (negative) bases are discarded.
inline double brute_force_transport(const std::vector<double>& a, const std::vector<double>& b,
                                    const std::vector<double>& cost) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(b.size());
  const int arcs = m * n;
  const int k = m + n - 1;
  double best = std::numeric_limits<double>::infinity();

  std::vector<int> pick(k);
  std::function<void(int, int)> rec = [&](int start, int chosen) {
    if (chosen == k) {
      // degrees
      std::vector<int> deg_s(m, 0), deg_t(n, 0);
      for (int c = 0; c < k; ++c) {
        ++deg_s[pick[c] / n];
        ++deg_t[pick[c] % n];
      }
      std::vector<double> ra = a, rb = b;
      std::vector<char> used(k, 0);
      std::vector<double> flow(k, 0.0);
      // leaf stripping
      for (int round = 0; round < k; ++round) {
        int found = -1;
        for (int c = 0; c < k; ++c) {
          if (used[c]) continue;
          const int i = pick[c] / n, j = pick[c] % n;
          if (deg_s[i] == 1 || deg_t[j] == 1) {
            found = c;
            break;
          }
        }
        if (found < 0) return;  // cycle, not a tree
        const int i = pick[found] / n, j = pick[found] % n;
        const double f = deg_s[i] == 1 ? ra[i] : rb[j];
        flow[found] = f;
        ra[i] -= f;
        rb[j] -= f;
        --deg_s[i];
        --deg_t[j];
        used[found] = 1;
      }
      double c_total = 0.0;
      for (int c = 0; c < k; ++c) {
        if (flow[c] < -1e-12) return;  // infeasible vertex
        c_total += flow[c] * cost[pick[c]];
      }
      if (c_total < best) best = c_total;
      return;
    }
    for (int e = start; e < arcs; ++e) {
      pick[chosen] = e;
      rec(e + 1, chosen + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace oracles
