#pragma once

#include <vector>

namespace masla {

// Exact solution of the balanced transportation problem
//   min sum_ij f_ij c_ij   s.t.  sum_j f_ij = supply_i, sum_i f_ij = demand_j, f >= 0
// by the network simplex method on the basis spanning tree. Returns the
// optimal cost together with the dual potentials; at the optimum the dual
// objective sum_i a_i u_i + sum_j b_j v_j equals the primal cost, which
// callers can use as an exactness witness.
struct TransportResult {
  double cost = 0.0;
  std::vector<double> u;  // source potentials
  std::vector<double> v;  // sink potentials
  double dual_objective() const;
  std::vector<double> supply, demand;  // the (balanced) marginals actually solved
};

TransportResult solve_transport(const std::vector<double>& supply, const std::vector<double>& demand,
                                const std::vector<double>& cost_row_major);

}  // namespace masla
