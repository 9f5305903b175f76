#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "masla/common.hpp"
#include "masla/field.hpp"
#include "masla/grid.hpp"

namespace masla {

// Which proximal sub-problems a target can answer.
enum class ProxSupport { none, smooth_part, g_comp_k, full };
enum class ProxPart { smooth_part, g_comp_k, full };

// Composite potential U(x) = F(x) + G(Kx) with G(p) = lambda * |p| and K a
// single-row linear map (Kx = <k_row, x>).
struct CompositeStructure {
  std::function<double(const Vec&)> f_value;
  std::function<Vec(const Vec&)> f_grad;
  double g_weight = 1.0;  // lambda
  Vec k_row;              // the matrix of K (one row; d' = 1 throughout the catalogue)
  Vec y_data;
  double sigma = 1.0;

  double apply_k(const Vec& x) const { return dot(k_row, x); }
  Vec apply_kt(double t) const {
    Vec out(k_row.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = t * k_row[i];
    return out;
  }
};

// A target density pi(x) proportional to exp(-U(x)), described by its
// potential U, the set-valued field D_U, and optional proximal structure.
// Immutable after construction; safe to share across chain workers.
struct TargetDistribution {
  std::string id;
  int dim = 1;
  std::function<double(const Vec&)> potential;
  std::function<FieldValue(const Vec&)> field;
  std::optional<CompositeStructure> composite;
  ProxSupport prox_support = ProxSupport::none;
  bool prox_convex = true;  // false: prox minimizers can tie (reported as NotUnique)

  // Quadrature hints for reference_density: abscissas where exp(-U) has a
  // kink (d = 1), and whether the 2-D potential is kinked along x2 == x1.
  std::vector<double> kinks_1d;
  bool kink_on_diagonal = false;

  GridSpec default_grid;
};

// Parameter overrides for catalogue targets (tv_l2 only; the others take none).
struct TargetParams {
  double sigma = 1.0;
  double lambda = 5.0;
  Vec y_data = {-1.0, 1.0};
};

// Catalogue ids: quartic, tv_l2, abs_quad, piecewise.
TargetDistribution make_target(const std::string& id, const TargetParams& params = {});
std::vector<std::string> target_ids();

double potential_value(const TargetDistribution& target, const Vec& x);
FieldValue field_set(const TargetDistribution& target, const Vec& x);
Vec field_select(const TargetDistribution& target, const Vec& x, SelectionRule rule, Rng& rng);

// Subdifferential of p -> lambda * |p|.
FieldValue subdiff_g(double p, double lambda);

// argmin_x part(x) + ||x - v||^2 / (2 step). Throws UnsupportedError when the
// target lacks the part, NotUniqueError when the minimizer set is not a point.
Vec prox_operator(const TargetDistribution& target, ProxPart part, const Vec& v, double step);

// Bin-integrated, normalized density of pi on the grid; masses sum to 1.
EmpiricalDistribution reference_density(const TargetDistribution& target, const GridSpec& grid);

}  // namespace masla
