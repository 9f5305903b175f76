#include "masla/ensemble.hpp"

#include <algorithm>
#include <cmath>

namespace masla {

namespace {

Vec initial_position(const InitSpec& init, int dim, Rng& rng) {
  if (static_cast<int>(init.x0.size()) != dim)
    throw std::invalid_argument("init: dimension does not match target");
  if (init.kind == InitKind::point) return init.x0;
  Vec x(dim);
  for (int i = 0; i < dim; ++i) x[i] = init.x0[i] + init.scale * rng.normal();
  return x;
}

void validate_schedule(const std::vector<std::int64_t>& schedule, std::int64_t n_iters) {
  if (schedule.empty()) throw std::invalid_argument("run_ensemble: empty snapshot schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] < 0) throw std::invalid_argument("run_ensemble: negative snapshot index");
    if (i > 0 && schedule[i] <= schedule[i - 1])
      throw std::invalid_argument("run_ensemble: schedule must be strictly increasing");
  }
  if (schedule.back() > n_iters)
    throw std::invalid_argument("run_ensemble: schedule exceeds n_iters");
}

template <bool kParallel>
SnapshotSet run_ensemble_impl(const KernelConfig& config, const TargetDistribution& target,
                              const RunSpec& run, const std::vector<std::int64_t>& schedule) {
  if (run.n_chains < 1) throw std::invalid_argument("run_ensemble: n_chains must be positive");
  if (run.n_iters < 0) throw std::invalid_argument("run_ensemble: n_iters must be non-negative");
  validate_schedule(schedule, run.n_iters);
  validate_kernel(config, target);

  const int d = target.dim;
  SnapshotSet out;
  out.schedule = schedule;
  out.dim = d;
  out.n_chains = run.n_chains;
  out.snapshots.assign(schedule.size(), std::vector<double>(run.n_chains * d, 0.0));
  out.init_desc = run.init.kind == InitKind::point ? "point" : "gaussian";

  const std::int64_t last = schedule.back();

#ifdef MASLA_HAVE_OPENMP
#pragma omp parallel for schedule(static) if (kParallel)
#endif
  for (std::int64_t i = 0; i < run.n_chains; ++i) {
    Rng rng(derive_stream(run.master_seed, static_cast<std::uint64_t>(i)));
    const Vec x0 = initial_position(run.init, d, rng);
    ChainState state = make_chain_state(config, target, x0, rng);
    std::size_t s = 0;
    if (schedule[s] == 0) {
      std::copy(state.position.begin(), state.position.end(), out.snapshots[0].begin() + i * d);
      ++s;
    }
    for (std::int64_t k = 1; k <= last; ++k) {
      step(config, target, state, rng);
      if (s < schedule.size() && schedule[s] == k) {
        std::copy(state.position.begin(), state.position.end(),
                  out.snapshots[s].begin() + i * d);
        ++s;
      }
    }
  }
  return out;
}

}  // namespace

Trajectory run_chain(const KernelConfig& config, const TargetDistribution& target, const Vec& x0,
                     std::int64_t n_iters, StreamId seed) {
  if (n_iters < 0) throw std::invalid_argument("run_chain: n_iters must be non-negative");
  Rng rng(seed);
  ChainState state = make_chain_state(config, target, x0, rng);

  Trajectory traj;
  traj.dim = target.dim;
  traj.n_iters = n_iters;
  traj.kernel_id = to_string(config.variant);
  traj.target_id = target.id;
  traj.seed = seed;
  traj.positions.reserve((n_iters + 1) * target.dim);
  traj.positions.insert(traj.positions.end(), state.position.begin(), state.position.end());
  for (std::int64_t k = 0; k < n_iters; ++k) {
    step(config, target, state, rng);
    traj.positions.insert(traj.positions.end(), state.position.begin(), state.position.end());
  }
  traj.accepts = state.accepts;
  return traj;
}

SnapshotSet run_ensemble(const KernelConfig& config, const TargetDistribution& target,
                         const RunSpec& run, const std::vector<std::int64_t>& schedule) {
  return run_ensemble_impl<true>(config, target, run, schedule);
}

SnapshotSet run_ensemble_serial(const KernelConfig& config, const TargetDistribution& target,
                                const RunSpec& run, const std::vector<std::int64_t>& schedule) {
  return run_ensemble_impl<false>(config, target, run, schedule);
}

double acceptance_rate(const Trajectory& trajectory) {
  if (trajectory.n_iters <= 0)
    throw std::invalid_argument("acceptance_rate: trajectory has no steps");
  return static_cast<double>(trajectory.accepts) / static_cast<double>(trajectory.n_iters);
}

std::int64_t retained_count(std::int64_t n_iters, double burn_in_fraction) {
  if (burn_in_fraction < 0.0 || burn_in_fraction >= 1.0)
    throw std::invalid_argument("burn_in_fraction must lie in [0, 1)");
  return n_iters - static_cast<std::int64_t>(std::floor(burn_in_fraction * n_iters));
}

std::vector<double> retained_samples(const Trajectory& traj, double burn_in_fraction) {
  const std::int64_t keep = retained_count(traj.n_iters, burn_in_fraction);
  const std::int64_t first = traj.n_iters + 1 - keep;  // index into positions
  std::vector<double> out;
  out.reserve(keep * traj.dim);
  out.insert(out.end(), traj.positions.begin() + first * traj.dim, traj.positions.end());
  return out;
}

}  // namespace masla
