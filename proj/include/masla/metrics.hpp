#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "masla/common.hpp"
#include "masla/ensemble.hpp"
#include "masla/grid.hpp"
#include "masla/rng.hpp"

namespace masla {

// Largest marginal the exact OT solver accepts; larger sets must be
// subsampled first (see subsample_points).
inline constexpr std::int64_t kW2MarginalCap = 2000;

// Discrete measure used as an optimal-transport marginal.
struct WeightedPointSet {
  int dim = 1;
  std::vector<double> points;   // n x dim, row-major
  std::vector<double> weights;  // non-negative, sum to 1

  std::int64_t size() const { return static_cast<std::int64_t>(weights.size()); }
  void validate() const;
};

WeightedPointSet points_from_samples(const std::vector<double>& samples, std::int64_t n, int dim);

// Uniform subsample without replacement (deterministic for a given seed);
// returns the input when n <= cap.
std::vector<double> subsample_points(const std::vector<double>& samples, std::int64_t n, int dim,
                                     std::int64_t cap, std::uint64_t seed);

// n equal-weight points taken at bin centers by systematic resampling of the
// bin masses; the deterministic stand-in for "samples of" a grid density.
WeightedPointSet systematic_points_from_density(const EmpiricalDistribution& density,
                                                std::int64_t n);

// 0.5 * sum |p - q| over a shared grid.
double tv_distance(const EmpiricalDistribution& p, const EmpiricalDistribution& q);

// Exact W2 between two 1-D empirical measures: sorted pairing when lengths
// match, otherwise both quantile functions read at max(n,m) midpoints.
double w2_one_dim(std::vector<double> a, std::vector<double> b);

// Exact W2 between weighted point sets (squared Euclidean ground cost),
// solved as a transportation problem.
double w2_discrete(const WeightedPointSet& mu, const WeightedPointSet& nu);

enum class MetricKind { tv, w2 };
using DistanceReference = std::variant<EmpiricalDistribution, WeightedPointSet>;

// One (iteration, distance) pair per scheduled snapshot. tv needs a grid
// reference; w2 needs a point-set reference (snapshot positions are used as
// unit-weight points, subsampled to the solver cap with `subsample_seed`).
std::vector<std::pair<std::int64_t, double>> distance_curve(const SnapshotSet& snapshots,
                                                            const DistanceReference& reference,
                                                            MetricKind metric,
                                                            std::uint64_t subsample_seed = 0);

}  // namespace masla
