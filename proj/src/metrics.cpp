#include "masla/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "masla/transport.hpp"

namespace masla {

void WeightedPointSet::validate() const {
  if (dim < 1) throw std::invalid_argument("WeightedPointSet: bad dimension");
  if (weights.empty()) throw std::invalid_argument("WeightedPointSet: empty");
  if (points.size() != weights.size() * static_cast<std::size_t>(dim))
    throw std::invalid_argument("WeightedPointSet: points/weights size mismatch");
  double s = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("WeightedPointSet: negative weight");
    s += w;
  }
  if (std::abs(s - 1.0) > 1e-12)
    throw std::invalid_argument("WeightedPointSet: weights must sum to 1");
}

WeightedPointSet points_from_samples(const std::vector<double>& samples, std::int64_t n, int dim) {
  if (n <= 0) throw std::invalid_argument("points_from_samples: empty sample list");
  WeightedPointSet ps;
  ps.dim = dim;
  ps.points = samples;
  ps.weights.assign(n, 1.0 / static_cast<double>(n));
  ps.validate();
  return ps;
}

std::vector<double> subsample_points(const std::vector<double>& samples, std::int64_t n, int dim,
                                     std::int64_t cap, std::uint64_t seed) {
  if (n <= cap) return samples;
  // partial Fisher-Yates over the index list
  std::vector<std::int64_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(mix64(seed ^ 0x57A7ED5AB5ULL), 0);
  for (std::int64_t i = 0; i < cap; ++i) {
    const std::int64_t j = i + static_cast<std::int64_t>(rng.uniform() * (n - i));
    std::swap(idx[i], idx[std::min(j, n - 1)]);
  }
  std::vector<double> out;
  out.reserve(cap * dim);
  for (std::int64_t i = 0; i < cap; ++i)
    for (int d = 0; d < dim; ++d) out.push_back(samples[idx[i] * dim + d]);
  return out;
}

WeightedPointSet systematic_points_from_density(const EmpiricalDistribution& density,
                                                std::int64_t n) {
  if (n <= 0) throw std::invalid_argument("systematic_points_from_density: n must be positive");
  const std::vector<double>& masses = density.normalized_masses();
  WeightedPointSet ps;
  ps.dim = density.grid.dim();
  ps.weights.assign(n, 1.0 / static_cast<double>(n));
  ps.points.reserve(n * ps.dim);
  double cum = 0.0;
  std::int64_t bin = -1;
  for (std::int64_t i = 0; i < n; ++i) {
    const double target = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    while (cum < target && bin + 1 < static_cast<std::int64_t>(masses.size())) {
      ++bin;
      cum += masses[bin];
    }
    const Vec c = density.grid.bin_center(std::max<std::int64_t>(bin, 0));
    ps.points.insert(ps.points.end(), c.begin(), c.end());
  }
  return ps;
}

double tv_distance(const EmpiricalDistribution& p, const EmpiricalDistribution& q) {
  if (!(p.grid == q.grid))
    throw std::invalid_argument("tv_distance: distributions live on different grids");
  const auto& mp = p.normalized_masses();
  const auto& mq = q.normalized_masses();
  double s = 0.0;
  for (std::size_t i = 0; i < mp.size(); ++i) s += std::abs(mp[i] - mq[i]);
  return 0.5 * s;
}

double w2_one_dim(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("w2_one_dim: empty input");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::int64_t na = static_cast<std::int64_t>(a.size());
  const std::int64_t nb = static_cast<std::int64_t>(b.size());
  const std::int64_t k = std::max(na, nb);
  double s = 0.0;
  for (std::int64_t i = 0; i < k; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(k);
    // left-continuous inverse CDF; reduces to sorted pairing when na == nb == k
    const double qa = a[std::min<std::int64_t>(static_cast<std::int64_t>(p * na), na - 1)];
    const double qb = b[std::min<std::int64_t>(static_cast<std::int64_t>(p * nb), nb - 1)];
    s += (qa - qb) * (qa - qb);
  }
  return std::sqrt(s / static_cast<double>(k));
}

double w2_discrete(const WeightedPointSet& mu, const WeightedPointSet& nu) {
  mu.validate();
  nu.validate();
  if (mu.dim != nu.dim) throw std::invalid_argument("w2_discrete: dimension mismatch");
  if (mu.size() > kW2MarginalCap || nu.size() > kW2MarginalCap)
    throw std::invalid_argument("w2_discrete: marginal exceeds " + std::to_string(kW2MarginalCap) +
                                " points; subsample first (see subsample_points)");

  // drop zero-weight atoms; they carry no mass
  auto compact = [](const WeightedPointSet& ps) {
    WeightedPointSet out;
    out.dim = ps.dim;
    for (std::int64_t i = 0; i < ps.size(); ++i) {
      if (ps.weights[i] > 0.0) {
        out.weights.push_back(ps.weights[i]);
        for (int d = 0; d < ps.dim; ++d) out.points.push_back(ps.points[i * ps.dim + d]);
      }
    }
    return out;
  };
  const WeightedPointSet a = compact(mu);
  const WeightedPointSet b = compact(nu);

  const std::int64_t m = a.size(), n = b.size();
  std::vector<double> cost(m * n);
  for (std::int64_t i = 0; i < m; ++i) {
    const double* pi = &a.points[i * a.dim];
    for (std::int64_t j = 0; j < n; ++j) {
      const double* pj = &b.points[j * b.dim];
      double s = 0.0;
      for (int d = 0; d < a.dim; ++d) {
        const double diff = pi[d] - pj[d];
        s += diff * diff;
      }
      cost[i * n + j] = s;
    }
  }
  const TransportResult res = solve_transport(a.weights, b.weights, cost);
  return std::sqrt(std::max(res.cost, 0.0));
}

std::vector<std::pair<std::int64_t, double>> distance_curve(const SnapshotSet& snapshots,
                                                            const DistanceReference& reference,
                                                            MetricKind metric,
                                                            std::uint64_t subsample_seed) {
  std::vector<std::pair<std::int64_t, double>> curve;
  curve.reserve(snapshots.schedule.size());
  if (metric == MetricKind::tv) {
    const auto* ref = std::get_if<EmpiricalDistribution>(&reference);
    if (!ref) throw std::invalid_argument("distance_curve: tv needs a grid reference");
    for (std::size_t s = 0; s < snapshots.schedule.size(); ++s) {
      const EmpiricalDistribution h =
          build_histogram(snapshots.snapshots[s], snapshots.n_chains, ref->grid);
      curve.emplace_back(snapshots.schedule[s], tv_distance(h, *ref));
    }
  } else {
    const auto* ref = std::get_if<WeightedPointSet>(&reference);
    if (!ref) throw std::invalid_argument("distance_curve: w2 needs a point-set reference");
    for (std::size_t s = 0; s < snapshots.schedule.size(); ++s) {
      const std::vector<double> pts =
          subsample_points(snapshots.snapshots[s], snapshots.n_chains, snapshots.dim,
                           kW2MarginalCap, subsample_seed + s);
      const std::int64_t n = std::min(snapshots.n_chains, kW2MarginalCap);
      curve.emplace_back(snapshots.schedule[s],
                         w2_discrete(points_from_samples(pts, n, snapshots.dim), *ref));
    }
  }
  return curve;
}

}  // namespace masla
