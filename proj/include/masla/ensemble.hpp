#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "masla/kernel.hpp"

namespace masla {

struct Trajectory {
  int dim = 1;
  std::int64_t n_iters = 0;
  std::vector<double> positions;  // (n_iters + 1) x dim, row-major, positions[0..d) = start
  std::int64_t accepts = 0;
  std::string kernel_id;
  std::string target_id;
  StreamId seed;

  const double* at(std::int64_t k) const { return &positions[k * dim]; }
};

enum class InitKind { point, gaussian };

struct InitSpec {
  InitKind kind = InitKind::point;
  Vec x0;             // point: the start; gaussian: the mean
  double scale = 1.0; // gaussian only

  static InitSpec point(Vec x) { return InitSpec{InitKind::point, std::move(x), 0.0}; }
  static InitSpec gaussian(Vec mean, double scale) {
    return InitSpec{InitKind::gaussian, std::move(mean), scale};
  }
};

struct RunSpec {
  std::int64_t n_chains = 1;
  std::int64_t n_iters = 0;
  double burn_in_fraction = 0.0;  // single-trajectory histograms only
  std::uint64_t master_seed = 0;
  InitSpec init;
};

// Per-iterate ensemble snapshots: snapshots[s] holds chain i's k_s-th iterate
// at rows i (n_chains x dim, row-major).
struct SnapshotSet {
  std::vector<std::int64_t> schedule;
  int dim = 1;
  std::int64_t n_chains = 0;
  std::vector<std::vector<double>> snapshots;
  std::string init_desc;

  const double* at(std::size_t s, std::int64_t chain) const {
    return &snapshots[s][chain * dim];
  }
};

// Deterministic function of all arguments; positions has length n_iters + 1.
Trajectory run_chain(const KernelConfig& config, const TargetDistribution& target, const Vec& x0,
                     std::int64_t n_iters, StreamId seed);

// Chain i consumes the stream derive_stream(run.master_seed, i); the result is
// independent of thread count. Chains only advance to max(schedule).
SnapshotSet run_ensemble(const KernelConfig& config, const TargetDistribution& target,
                         const RunSpec& run, const std::vector<std::int64_t>& schedule);

// Plain loop used as the reference in determinism tests and benchmarks.
SnapshotSet run_ensemble_serial(const KernelConfig& config, const TargetDistribution& target,
                                const RunSpec& run, const std::vector<std::int64_t>& schedule);

double acceptance_rate(const Trajectory& trajectory);

// Positions kept after burn-in: the last n_iters - floor(fraction * n_iters)
// iterates (the start point never counts as a sample).
std::vector<double> retained_samples(const Trajectory& trajectory, double burn_in_fraction);
std::int64_t retained_count(std::int64_t n_iters, double burn_in_fraction);

}  // namespace masla
