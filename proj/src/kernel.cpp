#include "masla/kernel.hpp"

#include <cmath>

namespace masla {

namespace {

double log_gaussian(const Vec& x, const Vec& mean, double var) {
  const double d = static_cast<double>(x.size());
  return -0.5 * d * std::log(2.0 * M_PI * var) - sq_dist(x, mean) / (2.0 * var);
}

// Drift beta such that the proposal mean is position - step * beta. For
// ProxSub the returned vector is K^T Y (see ChainState notes).
Vec compute_drift(const KernelConfig& cfg, const TargetDistribution& target, const Vec& x,
                  SelectionRule rule, Rng& rng) {
  switch (cfg.variant) {
    case KernelVariant::MASLA:
    case KernelVariant::MALA:
    case KernelVariant::ULA:
    case KernelVariant::USLA:
      return field_select(target, x, rule, rng);
    case KernelVariant::RWM:
      return Vec(x.size(), 0.0);
    case KernelVariant::PMALA: {
      const Vec p = prox_operator(target, ProxPart::full, x, cfg.step);
      Vec out(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - p[i]) / cfg.step;
      return out;
    }
    case KernelVariant::ProxSub: {
      const CompositeStructure& c = *target.composite;
      const Vec y = select_from(subdiff_g(c.apply_k(x), c.g_weight), rule, rng);
      return c.apply_kt(y[0]);
    }
    case KernelVariant::GradSub: {
      const CompositeStructure& c = *target.composite;
      const Vec y = select_from(subdiff_g(c.apply_k(x), c.g_weight), rule, rng);
      Vec out = c.f_grad(x);
      const Vec kt = c.apply_kt(y[0]);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += kt[i];
      return out;
    }
    case KernelVariant::MYULA: {
      const CompositeStructure& c = *target.composite;
      const Vec p = prox_operator(target, ProxPart::g_comp_k, x, cfg.theta);
      Vec out = c.f_grad(x);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += (x[i] - p[i]) / cfg.theta;
      return out;
    }
  }
  throw std::logic_error("compute_drift: bad variant");
}

// Drift without randomness, for the public density/acceptance evaluations.
Vec drift_deterministic(const KernelConfig& cfg, const TargetDistribution& target, const Vec& x) {
  const SelectionRule rule = cfg.selection == SelectionRule::uniform_random
                                 ? SelectionRule::min_norm
                                 : cfg.selection;
  Rng unused(0, 0);
  KernelConfig c = cfg;
  c.selection = rule;
  return compute_drift(c, target, x, rule, unused);
}

}  // namespace

const char* to_string(KernelVariant v) {
  switch (v) {
    case KernelVariant::MASLA: return "MASLA";
    case KernelVariant::MALA: return "MALA";
    case KernelVariant::RWM: return "RWM";
    case KernelVariant::PMALA: return "PMALA";
    case KernelVariant::ULA: return "ULA";
    case KernelVariant::USLA: return "USLA";
    case KernelVariant::ProxSub: return "ProxSub";
    case KernelVariant::GradSub: return "GradSub";
    case KernelVariant::MYULA: return "MYULA";
  }
  return "?";
}

std::vector<std::string> kernel_ids() {
  return {"MASLA", "MALA", "RWM", "PMALA", "ULA", "USLA", "ProxSub", "GradSub", "MYULA"};
}

KernelVariant kernel_variant_from_string(const std::string& s) {
  for (const auto& id : kernel_ids()) {
    if (s == id) {
      if (s == "MASLA") return KernelVariant::MASLA;
      if (s == "MALA") return KernelVariant::MALA;
      if (s == "RWM") return KernelVariant::RWM;
      if (s == "PMALA") return KernelVariant::PMALA;
      if (s == "ULA") return KernelVariant::ULA;
      if (s == "USLA") return KernelVariant::USLA;
      if (s == "ProxSub") return KernelVariant::ProxSub;
      if (s == "GradSub") return KernelVariant::GradSub;
      return KernelVariant::MYULA;
    }
  }
  std::string valid;
  for (const auto& id : kernel_ids()) valid += (valid.empty() ? "" : ", ") + id;
  throw ConfigError("unknown kernel id '" + s + "' (valid: " + valid + ")");
}

bool is_adjusted(KernelVariant v) {
  return v == KernelVariant::MASLA || v == KernelVariant::MALA || v == KernelVariant::RWM ||
         v == KernelVariant::PMALA;
}

void validate_kernel(const KernelConfig& config, const TargetDistribution& target) {
  if (!(config.step > 0.0)) throw ConfigError("kernel step must be positive");
  const KernelVariant v = config.variant;
  if (v == KernelVariant::RWM && !(config.rwm_scale > 0.0))
    throw ConfigError("RWM: rwm_scale must be positive");

  const bool needs_composite =
      v == KernelVariant::ProxSub || v == KernelVariant::GradSub || v == KernelVariant::MYULA;
  if (needs_composite && !target.composite)
    throw ConfigError(std::string(to_string(v)) + ": target '" + target.id +
                      "' has no composite structure F + G(Kx)");
  if (v == KernelVariant::PMALA &&
      (target.prox_support != ProxSupport::full || !target.prox_convex))
    throw ConfigError("PMALA: target '" + target.id + "' lacks a single-valued full prox");

  if (v == KernelVariant::MYULA) {
    if (!(config.theta > 0.0)) throw ConfigError("MYULA: theta must be positive");
    const double L = 1.0 / (target.composite->sigma * target.composite->sigma);
    const double bound = config.theta / (config.theta * L + 1.0);
    if (config.step > bound)
      throw ConfigError("MYULA: step " + std::to_string(config.step) +
                        " exceeds theta/(theta*L+1) = " + std::to_string(bound));
  }
}

ChainState make_chain_state(const KernelConfig& config, const TargetDistribution& target,
                            const Vec& x0, Rng& rng) {
  validate_kernel(config, target);
  ChainState s;
  s.position = x0;
  s.cached_potential = potential_value(target, x0);
  s.cached_drift = compute_drift(config, target, x0, config.selection, rng);
  return s;
}

Vec propose(const KernelConfig& cfg, const TargetDistribution& target, const ChainState& state,
            const Vec& noise) {
  if (noise.size() != state.position.size())
    throw std::invalid_argument("propose: noise dimension mismatch");
  const std::size_t d = state.position.size();
  Vec y(d);
  switch (cfg.variant) {
    case KernelVariant::RWM:
      for (std::size_t i = 0; i < d; ++i) y[i] = state.position[i] + cfg.rwm_scale * noise[i];
      return y;
    case KernelVariant::ProxSub: {
      Vec shifted(d);
      for (std::size_t i = 0; i < d; ++i)
        shifted[i] = state.position[i] - cfg.step * state.cached_drift[i];
      const Vec p = prox_operator(target, ProxPart::smooth_part, shifted, cfg.step);
      const double sd = std::sqrt(2.0 * cfg.step);
      for (std::size_t i = 0; i < d; ++i) y[i] = p[i] + sd * noise[i];
      return y;
    }
    default: {
      const double sd = std::sqrt(2.0 * cfg.step);
      for (std::size_t i = 0; i < d; ++i)
        y[i] = state.position[i] - cfg.step * state.cached_drift[i] + sd * noise[i];
      return y;
    }
  }
}

double log_proposal_density(const KernelConfig& cfg, const TargetDistribution& target,
                            const Vec& from, const Vec& to) {
  if (!is_adjusted(cfg.variant))
    throw UnsupportedError(std::string(to_string(cfg.variant)) +
                           ": unadjusted kernels have no tracked proposal density");
  if (cfg.variant == KernelVariant::RWM)
    return log_gaussian(to, from, cfg.rwm_scale * cfg.rwm_scale);
  const Vec beta = drift_deterministic(cfg, target, from);
  Vec mean(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) mean[i] = from[i] - cfg.step * beta[i];
  return log_gaussian(to, mean, 2.0 * cfg.step);
}

double log_acceptance(const KernelConfig& cfg, const TargetDistribution& target, const Vec& x,
                      const Vec& y) {
  if (!is_adjusted(cfg.variant))
    throw UnsupportedError(std::string(to_string(cfg.variant)) +
                           ": acceptance is defined for adjusted kernels only");
  const double du = potential_value(target, x) - potential_value(target, y);
  const double lq = log_proposal_density(cfg, target, y, x) - log_proposal_density(cfg, target, x, y);
  return std::min(0.0, du + lq);
}

void step(const KernelConfig& cfg, const TargetDistribution& target, ChainState& state, Rng& rng) {
  const std::size_t d = state.position.size();
  Vec noise(d);
  rng.fill_normal(noise);

  if (is_adjusted(cfg.variant)) {
    const double u = rng.uniform();
    const Vec y = propose(cfg, target, state, noise);
    const double uy = potential_value(target, y);
    const Vec drift_y = compute_drift(cfg, target, y, cfg.selection, rng);

    double log_q_fwd, log_q_rev;
    if (cfg.variant == KernelVariant::RWM) {
      log_q_fwd = log_q_rev = 0.0;  // symmetric
    } else {
      Vec mean_fwd(d), mean_rev(d);
      for (std::size_t i = 0; i < d; ++i) {
        mean_fwd[i] = state.position[i] - cfg.step * state.cached_drift[i];
        mean_rev[i] = y[i] - cfg.step * drift_y[i];
      }
      log_q_fwd = log_gaussian(y, mean_fwd, 2.0 * cfg.step);
      log_q_rev = log_gaussian(state.position, mean_rev, 2.0 * cfg.step);
    }
    const double log_acc = std::min(0.0, (state.cached_potential - uy) + log_q_rev - log_q_fwd);
    if (std::log(u) <= log_acc) {
      state.position = y;
      state.cached_potential = uy;
      state.cached_drift = drift_y;
      ++state.accepts;
    }
  } else {
    const Vec y = propose(cfg, target, state, noise);
    state.position = y;
    state.cached_potential = potential_value(target, y);
    state.cached_drift = compute_drift(cfg, target, y, cfg.selection, rng);
    ++state.accepts;  // unadjusted moves are always realized
  }
  ++state.iteration;
}

}  // namespace masla
