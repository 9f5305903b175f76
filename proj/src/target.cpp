#include "masla/target.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace masla {

namespace {

void check_point(const TargetDistribution& t, const Vec& x, const char* op) {
  if (static_cast<int>(x.size()) != t.dim)
    throw std::invalid_argument(std::string(op) + ": point dimension " + std::to_string(x.size()) +
                                " does not match target '" + t.id + "' (d=" + std::to_string(t.dim) + ")");
  if (!all_finite(x)) throw std::invalid_argument(std::string(op) + ": non-finite input");
}

double shrink(double s, double c) { return std::copysign(std::max(std::abs(s) - c, 0.0), s); }

TargetDistribution make_quartic() {
  TargetDistribution t;
  t.id = "quartic";
  t.dim = 1;
  t.potential = [](const Vec& x) {
    const double v = x[0];
    return v * v * v * v / 4.0;
  };
  t.field = [](const Vec& x) {
    const double v = x[0];
    return FieldValue::single1(v * v * v);
  };
  t.prox_support = ProxSupport::none;
  t.default_grid = grid1(-3.0, 3.0, 400);
  return t;
}

TargetDistribution make_abs_quad() {
  TargetDistribution t;
  t.id = "abs_quad";
  t.dim = 1;
  t.potential = [](const Vec& x) { return std::abs(x[0] * x[0] - 1.0); };
  t.field = [](const Vec& x) {
    const double v = x[0];
    if (v > 1.0 || v < -1.0) return FieldValue::single1(2.0 * v);
    if (v > -1.0 && v < 1.0) return FieldValue::single1(-2.0 * v);
    return FieldValue::range(-2.0, 2.0);  // v == +-1
  };
  t.prox_support = ProxSupport::full;
  t.prox_convex = false;
  t.kinks_1d = {-1.0, 1.0};
  t.default_grid = grid1(-3.0, 3.0, 400);
  return t;
}

TargetDistribution make_piecewise() {
  TargetDistribution t;
  t.id = "piecewise";
  t.dim = 1;
  t.potential = [](const Vec& x) {
    const double v = x[0];
    if (v < -1.0) return -v - 1.0;
    if (v < 0.0) return v + 1.0;
    if (v < 1.0) return 1.0 - v;
    return v - 1.0;
  };
  t.field = [](const Vec& x) {
    const double v = x[0];
    if (v == -1.0 || v == 0.0 || v == 1.0) return FieldValue::range(-1.0, 1.0);
    if (v < -1.0) return FieldValue::single1(-1.0);
    if (v < 0.0) return FieldValue::single1(1.0);
    if (v < 1.0) return FieldValue::single1(-1.0);
    return FieldValue::single1(1.0);
  };
  t.prox_support = ProxSupport::none;
  t.kinks_1d = {-1.0, 0.0, 1.0};
  t.default_grid = grid1(-15.0, 15.0, 600);
  return t;
}

TargetDistribution make_tv_l2(const TargetParams& p) {
  if (!(p.sigma > 0.0)) throw std::invalid_argument("tv_l2: sigma must be positive");
  if (!(p.lambda > 0.0)) throw std::invalid_argument("tv_l2: lambda must be positive");
  if (p.y_data.size() != 2) throw std::invalid_argument("tv_l2: y_data must have dimension 2");

  CompositeStructure comp;
  comp.sigma = p.sigma;
  comp.g_weight = p.lambda;
  comp.y_data = p.y_data;
  comp.k_row = {-1.0, 1.0};  // Kx = x2 - x1, ||K||^2 <= 2
  const double inv_s2 = 1.0 / (p.sigma * p.sigma);
  const Vec y = p.y_data;
  comp.f_value = [y, inv_s2](const Vec& x) { return 0.5 * inv_s2 * sq_dist(x, y); };
  comp.f_grad = [y, inv_s2](const Vec& x) {
    Vec g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = inv_s2 * (x[i] - y[i]);
    return g;
  };

  TargetDistribution t;
  t.id = "tv_l2";
  t.dim = 2;
  const double lambda = p.lambda;
  const CompositeStructure c = comp;
  t.potential = [c, lambda](const Vec& x) { return c.f_value(x) + lambda * std::abs(c.apply_k(x)); };
  t.field = [c, lambda](const Vec& x) {
    const Vec g = c.f_grad(x);
    const double kx = c.apply_k(x);
    if (kx != 0.0) {
      const double s = std::copysign(lambda, kx);
      Vec out = g;
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * c.k_row[i];
      return FieldValue::single(out);
    }
    Vec a = g, b = g;
    for (std::size_t i = 0; i < g.size(); ++i) {
      a[i] -= lambda * c.k_row[i];
      b[i] += lambda * c.k_row[i];
    }
    return FieldValue::segment(std::move(a), std::move(b));
  };
  t.composite = comp;
  t.prox_support = ProxSupport::full;
  t.kink_on_diagonal = true;
  t.default_grid = grid2(-4.0, 2.0, 128, -2.0, 4.0, 128);
  return t;
}

// argmin over x of lambda*|<k,x>| + ||x - v||^2/(2 theta); exact direction
// soft-threshold along k.
Vec prox_g_comp_k(const CompositeStructure& c, const Vec& v, double theta) {
  const double kk = sq_norm(c.k_row);
  const double kv = dot(c.k_row, v);
  const double t_star = shrink(kv, c.g_weight * theta * kk);
  const double s = (t_star - kv) / kk;
  Vec out = v;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * c.k_row[i];
  return out;
}

Vec prox_smooth(const CompositeStructure& c, const Vec& v, double tau) {
  const double a = 1.0 / (c.sigma * c.sigma);
  const double b = 1.0 / tau;
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (a * c.y_data[i] + b * v[i]) / (a + b);
  return out;
}

Vec prox_full_tv(const CompositeStructure& c, const Vec& v, double tau) {
  const double a = 1.0 / (c.sigma * c.sigma);
  const double b = 1.0 / tau;
  Vec w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) w[i] = (a * c.y_data[i] + b * v[i]) / (a + b);
  return prox_g_comp_k(c, w, 1.0 / (a + b));
}

// 1-D prox of |x^2 - 1|: evaluate the stationary points of all three branches
// plus the kinks and compare. Two distinct global minimizers -> NotUnique.
Vec prox_abs_quad(const Vec& v0, double tau) {
  const double v = v0[0];
  auto phi = [&](double x) { return std::abs(x * x - 1.0) + (x - v) * (x - v) / (2.0 * tau); };

  std::vector<double> cand = {1.0, -1.0};
  if (tau < 0.5) {
    const double xi = v / (1.0 - 2.0 * tau);  // inner branch 1 - x^2
    if (xi > -1.0 && xi < 1.0) cand.push_back(xi);
  }
  const double xo = v / (1.0 + 2.0 * tau);  // outer branches x^2 - 1
  if (xo > 1.0) cand.push_back(xo);
  if (xo < -1.0) cand.push_back(xo);

  double best = cand[0], best_val = phi(cand[0]);
  for (std::size_t i = 1; i < cand.size(); ++i) {
    const double val = phi(cand[i]);
    if (val < best_val) {
      best_val = val;
      best = cand[i];
    }
  }
  for (double x : cand) {
    if (std::abs(x - best) > 1e-9 && phi(x) <= best_val + 1e-12 * (1.0 + std::abs(best_val)))
      throw NotUniqueError("prox_operator: minimizer of abs_quad prox is not unique at v=" +
                           std::to_string(v));
  }
  return Vec{best};
}

}  // namespace

TargetDistribution make_target(const std::string& id, const TargetParams& params) {
  if (id == "quartic") return make_quartic();
  if (id == "tv_l2") return make_tv_l2(params);
  if (id == "abs_quad") return make_abs_quad();
  if (id == "piecewise") return make_piecewise();
  std::string valid;
  for (const auto& s : target_ids()) valid += (valid.empty() ? "" : ", ") + s;
  throw std::invalid_argument("unknown target id '" + id + "' (valid: " + valid + ")");
}

std::vector<std::string> target_ids() { return {"quartic", "tv_l2", "abs_quad", "piecewise"}; }

double potential_value(const TargetDistribution& target, const Vec& x) {
  check_point(target, x, "potential_value");
  return target.potential(x);
}

FieldValue field_set(const TargetDistribution& target, const Vec& x) {
  check_point(target, x, "field_set");
  return target.field(x);
}

Vec field_select(const TargetDistribution& target, const Vec& x, SelectionRule rule, Rng& rng) {
  return select_from(field_set(target, x), rule, rng);
}

FieldValue subdiff_g(double p, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("subdiff_g: lambda must be positive");
  if (p == 0.0) return FieldValue::range(-lambda, lambda);
  return FieldValue::single1(std::copysign(lambda, p));
}

Vec prox_operator(const TargetDistribution& target, ProxPart part, const Vec& v, double step) {
  check_point(target, v, "prox_operator");
  if (!(step > 0.0)) throw std::invalid_argument("prox_operator: step must be positive");
  if (target.prox_support == ProxSupport::none)
    throw UnsupportedError("prox_operator: target '" + target.id + "' has no proximal operator");

  if (!target.prox_convex) {
    if (part != ProxPart::full)
      throw UnsupportedError("prox_operator: target '" + target.id + "' has no composite split");
    return prox_abs_quad(v, step);
  }

  const CompositeStructure& c = *target.composite;
  switch (part) {
    case ProxPart::smooth_part: return prox_smooth(c, v, step);
    case ProxPart::g_comp_k: return prox_g_comp_k(c, v, step);
    case ProxPart::full: return prox_full_tv(c, v, step);
  }
  throw std::logic_error("prox_operator: bad part");
}

}  // namespace masla
