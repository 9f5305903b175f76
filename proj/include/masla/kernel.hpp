#pragma once

#include <cstdint>
#include <string>

#include "masla/common.hpp"
#include "masla/field.hpp"
#include "masla/rng.hpp"
#include "masla/target.hpp"

namespace masla {

// Metropolis-adjusted variants: MASLA, MALA, RWM, PMALA.
// Unadjusted variants: ULA, USLA, ProxSub, GradSub, MYULA.
enum class KernelVariant { MASLA, MALA, RWM, PMALA, ULA, USLA, ProxSub, GradSub, MYULA };

const char* to_string(KernelVariant v);
KernelVariant kernel_variant_from_string(const std::string& s);
std::vector<std::string> kernel_ids();
bool is_adjusted(KernelVariant v);

struct KernelConfig {
  KernelVariant variant = KernelVariant::MASLA;
  double step = 0.1;      // gamma for Langevin kernels, tau for the composite kernels
  double theta = 0.0;     // Moreau-Yosida parameter (MYULA only)
  SelectionRule selection = SelectionRule::min_norm;
  double rwm_scale = 1.0; // proposal stddev (RWM only)
};

// Throws ConfigError when the pair (config, target) is unusable: bad step,
// missing prox support, or the MYULA constraint step <= theta/(theta*L+1)
// with L = 1/sigma^2.
void validate_kernel(const KernelConfig& config, const TargetDistribution& target);

// Chain state with the values every proposal from `position` reuses.
// cached_drift is the variant's mean-defining vector:
//   MASLA/MALA/ULA/USLA  selected element of D_U(position)
//   PMALA                (position - prox_full(position; step)) / step
//   MYULA                grad F(position) + Moreau-envelope gradient of G.K
//   GradSub              K^T Y + grad F(position), Y in dG(K position)
//   ProxSub              K^T Y only (the prox is applied inside the update)
//   RWM                  zero
// Selection randomness (rule == uniform_random) is consumed when the drift is
// cached: at construction, and at each point the chain moves to.
struct ChainState {
  Vec position;
  double cached_potential = 0.0;
  Vec cached_drift;
  std::int64_t iteration = 0;
  std::int64_t accepts = 0;
};

ChainState make_chain_state(const KernelConfig& config, const TargetDistribution& target,
                            const Vec& x0, Rng& rng);

// Deterministic map from (state, noise) to the proposal point.
Vec propose(const KernelConfig& config, const TargetDistribution& target, const ChainState& state,
            const Vec& noise);

// Log-density of the proposal Gaussian q(from -> to). Adjusted variants only.
// With rule == uniform_random the drift at `from` is evaluated with min_norm;
// all rules agree wherever the field is a singleton, which is almost every
// point of every catalogue target.
double log_proposal_density(const KernelConfig& config, const TargetDistribution& target,
                            const Vec& from, const Vec& to);

// min(0, [U(x) - U(y)] + log q(y,x) - log q(x,y)); adjusted variants only.
double log_acceptance(const KernelConfig& config, const TargetDistribution& target, const Vec& x,
                      const Vec& y);

// One transition. Stream draw order per step: noise vector (d normals), then
// the acceptance uniform (adjusted variants), then selection randomness.
// Rejected steps leave position and both caches untouched.
void step(const KernelConfig& config, const TargetDistribution& target, ChainState& state, Rng& rng);

}  // namespace masla
