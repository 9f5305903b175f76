// Bin-integrated reference densities. exp(-U) is smooth between the known
// kinks of each catalogue target, so every bin integral is split there and
// each smooth piece handled by Romberg.

#include <cmath>

#include "masla/quadrature.hpp"
#include "masla/target.hpp"

namespace masla {

namespace {

double bin_mass_1d(const TargetDistribution& t, double a, double b) {
  Vec x(1);
  auto f = [&](double v) {
    x[0] = v;
    return std::exp(-t.potential(x));
  };
  return integrate_split(f, a, b, t.kinks_1d, 1e-11);
}

// Iterated integral over [a1,b1] x [a2,b2]. The inner x2-integral splits at
// the diagonal kink x2 == x1; the result is smooth in x1 except where the
// kink enters or leaves the x2-range, so the outer integral splits there.
double bin_mass_2d(const TargetDistribution& t, double a1, double b1, double a2, double b2) {
  auto inner = [&](double x1) {
    Vec x(2);
    x[0] = x1;
    auto f = [&](double x2) {
      x[1] = x2;
      return std::exp(-t.potential(x));
    };
    if (t.kink_on_diagonal && x1 > a2 && x1 < b2)
      return romberg(f, a2, x1, 1e-12) + romberg(f, x1, b2, 1e-12);
    return romberg(f, a2, b2, 1e-12);
  };
  std::vector<double> breaks;
  if (t.kink_on_diagonal) breaks = {a2, b2};
  return integrate_split(inner, a1, b1, breaks, 1e-10);
}

}  // namespace

EmpiricalDistribution reference_density(const TargetDistribution& target, const GridSpec& grid) {
  grid.validate();
  if (grid.dim() != target.dim)
    throw std::invalid_argument("reference_density: grid dimension does not match target");

  const std::int64_t nbins = grid.total_bins();
  std::vector<double> raw(nbins, 0.0);

  if (target.dim == 1) {
    const GridAxis& ax = grid.axes[0];
    const double w = (ax.hi - ax.lo) / ax.bins;
#ifdef MASLA_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
    for (std::int64_t i = 0; i < nbins; ++i)
      raw[i] = bin_mass_1d(target, ax.lo + i * w, ax.lo + (i + 1) * w);
  } else if (target.dim == 2) {
    const GridAxis& a0 = grid.axes[0];
    const GridAxis& a1 = grid.axes[1];
    const double w0 = (a0.hi - a0.lo) / a0.bins;
    const double w1 = (a1.hi - a1.lo) / a1.bins;
#ifdef MASLA_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 4)
#endif
    for (std::int64_t i = 0; i < nbins; ++i) {
      const std::int64_t r = i / a1.bins;
      const std::int64_t c = i % a1.bins;
      raw[i] = bin_mass_2d(target, a0.lo + r * w0, a0.lo + (r + 1) * w0, a1.lo + c * w1,
                           a1.lo + (c + 1) * w1);
    }
  } else {
    throw std::invalid_argument("reference_density: only d <= 2 targets are supported");
  }

  // Kahan-compensated normalization.
  double sum = 0.0, comp = 0.0;
  for (double m : raw) {
    const double y = m - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  if (!(sum > 0.0)) throw std::invalid_argument("reference_density: grid carries no mass");

  EmpiricalDistribution out;
  out.grid = grid;
  out.masses.resize(nbins);
  for (std::int64_t i = 0; i < nbins; ++i) out.masses[i] = raw[i] / sum;
  out.total_in_range = 0;
  return out;
}

}  // namespace masla
