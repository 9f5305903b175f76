#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>

#include "masla/common.hpp"
#include "masla/rng.hpp"

namespace masla {

// How a drift vector is picked out of a set-valued field when the set is not
// a singleton. min_norm is the default: deterministic, and zero at critical
// kinks where the set brackets the origin.
enum class SelectionRule { min_norm, left_extreme, right_extreme, uniform_random };

inline const char* to_string(SelectionRule r) {
  switch (r) {
    case SelectionRule::min_norm: return "min_norm";
    case SelectionRule::left_extreme: return "left_extreme";
    case SelectionRule::right_extreme: return "right_extreme";
    case SelectionRule::uniform_random: return "uniform_random";
  }
  return "?";
}

inline SelectionRule selection_rule_from_string(const std::string& s) {
  if (s == "min_norm") return SelectionRule::min_norm;
  if (s == "left_extreme") return SelectionRule::left_extreme;
  if (s == "right_extreme") return SelectionRule::right_extreme;
  if (s == "uniform_random") return SelectionRule::uniform_random;
  throw std::invalid_argument("unknown selection rule '" + s +
                              "' (valid: min_norm, left_extreme, right_extreme, uniform_random)");
}

// The value D_U(x) of a conservative field at one point: either a single
// vector, a 1-D interval [lo, hi], or a segment between two points (the only
// hull shape the target catalogue produces).
struct FieldValue {
  enum class Kind { singleton, interval_1d, hull };

  Kind kind = Kind::singleton;
  Vec point;         // singleton
  double lo = 0.0;   // interval_1d
  double hi = 0.0;
  Vec gen0, gen1;    // hull endpoints

  static FieldValue single(Vec v) {
    FieldValue f;
    f.kind = Kind::singleton;
    f.point = std::move(v);
    return f;
  }

  static FieldValue single1(double v) { return single(Vec{v}); }

  static FieldValue range(double lo, double hi) {
    if (!(lo <= hi)) throw std::invalid_argument("FieldValue interval requires lo <= hi");
    FieldValue f;
    f.kind = Kind::interval_1d;
    f.lo = lo;
    f.hi = hi;
    return f;
  }

  static FieldValue segment(Vec a, Vec b) {
    if (a.size() != b.size()) throw std::invalid_argument("FieldValue segment endpoint dims differ");
    FieldValue f;
    f.kind = Kind::hull;
    f.gen0 = std::move(a);
    f.gen1 = std::move(b);
    return f;
  }

  std::size_t dim() const {
    switch (kind) {
      case Kind::singleton: return point.size();
      case Kind::interval_1d: return 1;
      case Kind::hull: return gen0.size();
    }
    return 0;
  }

  bool is_singleton(double tol = 0.0) const {
    switch (kind) {
      case Kind::singleton: return true;
      case Kind::interval_1d: return hi - lo <= tol;
      case Kind::hull: return sq_dist(gen0, gen1) <= tol * tol;
    }
    return false;
  }

  // Membership up to `tol` (used by property tests).
  bool contains(const Vec& v, double tol = 1e-12) const {
    if (v.size() != dim()) return false;
    switch (kind) {
      case Kind::singleton:
        return std::sqrt(sq_dist(v, point)) <= tol;
      case Kind::interval_1d:
        return v[0] >= lo - tol && v[0] <= hi + tol;
      case Kind::hull: {
        // project v on the segment, compare residual
        Vec d(gen0.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = gen1[i] - gen0[i];
        const double dd = sq_norm(d);
        double t = 0.0;
        if (dd > 0) {
          double num = 0.0;
          for (std::size_t i = 0; i < d.size(); ++i) num += (v[i] - gen0[i]) * d[i];
          t = std::clamp(num / dd, 0.0, 1.0);
        }
        double r = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
          const double e = v[i] - (gen0[i] + t * d[i]);
          r += e * e;
        }
        return std::sqrt(r) <= tol;
      }
    }
    return false;
  }
};

// Pick an element of `f` according to `rule`. When rule == uniform_random one
// uniform is consumed on every call (also for singletons) so that stream
// layouts do not depend on where the chain happens to sit.
inline Vec select_from(const FieldValue& f, SelectionRule rule, Rng& rng) {
  double u = (rule == SelectionRule::uniform_random) ? rng.uniform() : 0.0;
  switch (f.kind) {
    case FieldValue::Kind::singleton:
      return f.point;
    case FieldValue::Kind::interval_1d: {
      double v = 0.0;
      switch (rule) {
        case SelectionRule::min_norm: v = std::clamp(0.0, f.lo, f.hi); break;
        case SelectionRule::left_extreme: v = f.lo; break;
        case SelectionRule::right_extreme: v = f.hi; break;
        case SelectionRule::uniform_random: v = f.lo + u * (f.hi - f.lo); break;
      }
      return Vec{v};
    }
    case FieldValue::Kind::hull: {
      double t = 0.0;
      switch (rule) {
        case SelectionRule::min_norm: {
          Vec d(f.gen0.size());
          for (std::size_t i = 0; i < d.size(); ++i) d[i] = f.gen1[i] - f.gen0[i];
          const double dd = sq_norm(d);
          t = dd > 0 ? std::clamp(-dot(f.gen0, d) / dd, 0.0, 1.0) : 0.0;
          break;
        }
        case SelectionRule::left_extreme: t = 0.0; break;
        case SelectionRule::right_extreme: t = 1.0; break;
        case SelectionRule::uniform_random: t = u; break;
      }
      Vec out(f.gen0.size());
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.gen0[i] + t * (f.gen1[i] - f.gen0[i]);
      return out;
    }
  }
  throw std::logic_error("select_from: bad kind");
}

}  // namespace masla
