#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "masla/common.hpp"

namespace masla {

// Rectangular histogram grid. Bins are half-open [edge_k, edge_{k+1}) except
// the last one per axis, which is closed at the upper bound.
struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  int bins = 0;
};

struct GridSpec {
  std::vector<GridAxis> axes;

  int dim() const { return static_cast<int>(axes.size()); }

  std::int64_t total_bins() const {
    std::int64_t n = 1;
    for (const auto& a : axes) n *= a.bins;
    return n;
  }

  void validate() const {
    if (axes.empty()) throw std::invalid_argument("GridSpec: no axes");
    for (const auto& a : axes) {
      if (!(a.lo < a.hi)) throw std::invalid_argument("GridSpec: lower bound must be < upper bound");
      if (a.bins < 1) throw std::invalid_argument("GridSpec: bin count must be >= 1");
      if (!std::isfinite(a.lo) || !std::isfinite(a.hi))
        throw std::invalid_argument("GridSpec: bounds must be finite");
    }
  }

  // Flat row-major bin index, or -1 if the point falls outside the grid.
  std::int64_t bin_index(const double* x) const {
    std::int64_t flat = 0;
    for (const auto& a : axes) {
      const double v = *x++;
      if (v < a.lo || v > a.hi) return -1;
      int k = static_cast<int>((v - a.lo) / (a.hi - a.lo) * a.bins);
      if (k >= a.bins) k = a.bins - 1;  // v == hi, or rounding at the top edge
      flat = flat * a.bins + k;
    }
    return flat;
  }

  Vec bin_center(std::int64_t flat) const {
    Vec c(axes.size());
    for (int d = dim() - 1; d >= 0; --d) {
      const auto& a = axes[d];
      const std::int64_t k = flat % a.bins;
      flat /= a.bins;
      c[d] = a.lo + (static_cast<double>(k) + 0.5) * (a.hi - a.lo) / a.bins;
    }
    return c;
  }

  double bin_volume() const {
    double v = 1.0;
    for (const auto& a : axes) v *= (a.hi - a.lo) / a.bins;
    return v;
  }

  bool operator==(const GridSpec& o) const {
    if (axes.size() != o.axes.size()) return false;
    for (std::size_t i = 0; i < axes.size(); ++i) {
      if (axes[i].lo != o.axes[i].lo || axes[i].hi != o.axes[i].hi || axes[i].bins != o.axes[i].bins)
        return false;
    }
    return true;
  }
};

inline GridSpec grid1(double lo, double hi, int bins) { return GridSpec{{GridAxis{lo, hi, bins}}}; }
inline GridSpec grid2(double lo0, double hi0, int b0, double lo1, double hi1, int b1) {
  return GridSpec{{GridAxis{lo0, hi0, b0}, GridAxis{lo1, hi1, b1}}};
}

// Normalized distribution over a grid. Built either from integer sample
// counts (see build_histogram) or directly from bin-integrated densities
// (see reference_density), in which case counts stays empty.
struct EmpiricalDistribution {
  GridSpec grid;
  std::vector<std::int64_t> counts;  // empty when built from a density
  std::vector<double> masses;        // empty when no in-range sample exists
  std::int64_t total_in_range = 0;
  std::int64_t dropped = 0;

  const std::vector<double>& normalized_masses() const {
    if (masses.empty())
      throw std::invalid_argument("EmpiricalDistribution: no in-range mass to normalize");
    return masses;
  }
};

// Integer binning of `n` samples of dimension grid.dim() stored row-major in
// `samples`. Out-of-range samples are counted in `dropped` and excluded.
inline EmpiricalDistribution build_histogram(const std::vector<double>& samples, std::int64_t n,
                                             const GridSpec& grid) {
  grid.validate();
  const int d = grid.dim();
  if (n <= 0) throw std::invalid_argument("build_histogram: empty sample list");
  if (static_cast<std::int64_t>(samples.size()) != n * d)
    throw std::invalid_argument("build_histogram: sample buffer size does not match n * dim");

  EmpiricalDistribution out;
  out.grid = grid;
  out.counts.assign(grid.total_bins(), 0);
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t k = grid.bin_index(&samples[i * d]);
    if (k < 0) {
      ++out.dropped;
    } else {
      ++out.counts[k];
      ++out.total_in_range;
    }
  }
  if (out.total_in_range > 0) {
    out.masses.resize(out.counts.size());
    const double inv = 1.0 / static_cast<double>(out.total_in_range);
    for (std::size_t i = 0; i < out.counts.size(); ++i)
      out.masses[i] = static_cast<double>(out.counts[i]) * inv;
  }
  return out;
}

inline EmpiricalDistribution build_histogram(const std::vector<Vec>& samples, const GridSpec& grid) {
  grid.validate();
  const int d = grid.dim();
  std::vector<double> flat;
  flat.reserve(samples.size() * d);
  for (const auto& s : samples) {
    if (static_cast<int>(s.size()) != d)
      throw std::invalid_argument("build_histogram: sample dimension mismatch");
    flat.insert(flat.end(), s.begin(), s.end());
  }
  return build_histogram(flat, static_cast<std::int64_t>(samples.size()), grid);
}

}  // namespace masla
