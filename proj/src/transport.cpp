// Network simplex for the dense transportation problem.
//
// The basis is a spanning tree over the m supply and n demand nodes, stored
// through parent pointers; the flow on the edge to the parent lives on the
// child node. Entering arcs are found by block pricing over the m*n reduced
// costs. After a pivot the detached subtree is re-hung at the entering arc's
// endpoint and its depths/potentials are rebuilt by a traversal, so every
// pivot costs O(path + subtree).
//
// Leaving-arc ties are broken the way LEMON's NetworkSimplex does (strict
// minimum on the source-side path, non-strict on the target side), which
// keeps the method from cycling on the highly degenerate equal-weight
// marginals produced by point-set W2 problems.

#include "masla/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace masla {

double TransportResult::dual_objective() const {
  double s = 0.0;
  for (std::size_t i = 0; i < supply.size(); ++i) s += supply[i] * u[i];
  for (std::size_t j = 0; j < demand.size(); ++j) s += demand[j] * v[j];
  return s;
}

namespace {

struct Tree {
  int m = 0, n = 0;
  std::vector<int> parent;                 // -1 for the root (node 0)
  std::vector<double> flow;                // on the edge to the parent
  std::vector<int> depth;
  std::vector<double> pot;                 // rc(i,j) = c(i,j) - pot[i] - pot[m+j]
  std::vector<std::vector<int>> adj;       // tree neighbours

  bool is_source(int x) const { return x < m; }
};

void remove_adj(std::vector<int>& list, int x) {
  for (std::size_t k = 0; k < list.size(); ++k) {
    if (list[k] == x) {
      list[k] = list.back();
      list.pop_back();
      return;
    }
  }
}

}  // namespace

TransportResult solve_transport(const std::vector<double>& supply_in,
                                const std::vector<double>& demand_in,
                                const std::vector<double>& cost) {
  const int m = static_cast<int>(supply_in.size());
  const int n = static_cast<int>(demand_in.size());
  if (m == 0 || n == 0) throw std::invalid_argument("solve_transport: empty marginal");
  if (cost.size() != static_cast<std::size_t>(m) * n)
    throw std::invalid_argument("solve_transport: cost matrix size mismatch");

  std::vector<double> a = supply_in, b = demand_in;
  double sa = 0.0, sb = 0.0;
  for (double x : a) {
    if (!(x >= 0.0)) throw std::invalid_argument("solve_transport: negative supply");
    sa += x;
  }
  for (double x : b) {
    if (!(x >= 0.0)) throw std::invalid_argument("solve_transport: negative demand");
    sb += x;
  }
  if (!(sa > 0.0)) throw std::invalid_argument("solve_transport: zero total supply");
  if (std::abs(sa - sb) > 1e-9 * sa)
    throw std::invalid_argument("solve_transport: marginals are not balanced");
  b[n - 1] += sa - sb;  // absorb rounding dust so the problem balances exactly

  const int N = m + n;
  Tree t;
  t.m = m;
  t.n = n;
  t.parent.assign(N, -1);
  t.flow.assign(N, 0.0);
  t.depth.assign(N, 0);
  t.pot.assign(N, 0.0);
  t.adj.assign(N, {});

  // Northwest-corner initial basis; each arc attaches one new node.
  {
    std::vector<double> ar = a, br = b;
    int i = 0, j = 0;
    bool attach_sink = true;  // first arc (0,0) attaches sink 0 under source 0
    while (true) {
      const double f = std::min(ar[i], br[j]);
      const int snk = m + j;
      if (attach_sink) {
        t.parent[snk] = i;
        t.flow[snk] = f;
        t.adj[i].push_back(snk);
        t.adj[snk].push_back(i);
      } else {
        t.parent[i] = snk;
        t.flow[i] = f;
        t.adj[i].push_back(snk);
        t.adj[snk].push_back(i);
      }
      if (i == m - 1 && j == n - 1) break;
      if (ar[i] <= br[j] && i < m - 1) {
        br[j] -= ar[i];
        ar[i] = 0.0;
        ++i;
        attach_sink = false;
      } else {
        ar[i] -= br[j];
        br[j] = 0.0;
        ++j;
        attach_sink = true;
      }
    }
  }

  // Depths and potentials from the root.
  {
    std::vector<int> stack = {0};
    std::vector<char> seen(N, 0);
    seen[0] = 1;
    t.pot[0] = 0.0;
    t.depth[0] = 0;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (int y : t.adj[x]) {
        if (seen[y]) continue;
        seen[y] = 1;
        t.depth[y] = t.depth[x] + 1;
        const int src = t.is_source(x) ? x : y;
        const int snk = t.is_source(x) ? y : x;
        t.pot[y] = cost[static_cast<std::size_t>(src) * n + (snk - m)] - t.pot[x];
        stack.push_back(y);
      }
    }
  }

  double cmax = 1.0;
  for (double c : cost) cmax = std::max(cmax, std::abs(c));
  const double tol = 1e-12 * cmax;

  const std::int64_t narcs = static_cast<std::int64_t>(m) * n;
  const std::int64_t block =
      std::max<std::int64_t>(64, static_cast<std::int64_t>(std::sqrt(static_cast<double>(narcs))));
  std::int64_t pos = 0;
  const std::int64_t max_pivots = 100000000;
  std::int64_t pivots = 0;

  std::vector<int> path_nodes;  // reused buffer

  while (true) {
    // --- entering arc: best of the first block that contains any candidate
    int ep = -1, eq = -1;
    double best = -tol;
    std::int64_t scanned = 0;
    while (scanned < narcs) {
      const std::int64_t stop = std::min<std::int64_t>(narcs - scanned, block);
      for (std::int64_t k = 0; k < stop; ++k) {
        const std::int64_t e = pos + k >= narcs ? pos + k - narcs : pos + k;
        const int i = static_cast<int>(e / n);
        const int j = static_cast<int>(e % n);
        const double rc = cost[e] - t.pot[i] - t.pot[m + j];
        if (rc < best) {
          best = rc;
          ep = i;
          eq = m + j;
        }
      }
      scanned += stop;
      pos += stop;
      if (pos >= narcs) pos -= narcs;
      if (ep >= 0) break;
    }
    if (ep < 0) break;  // optimal

    if (++pivots > max_pivots) throw std::runtime_error("solve_transport: pivot limit exceeded");

    // --- join (lowest common ancestor)
    int x = ep, y = eq;
    while (t.depth[x] > t.depth[y]) x = t.parent[x];
    while (t.depth[y] > t.depth[x]) y = t.parent[y];
    while (x != y) {
      x = t.parent[x];
      y = t.parent[y];
    }
    const int join = x;

    // --- leaving arc: minimum flow among the backward edges of the cycle.
    // Backward on the p-side means the child is a source; on the q-side the
    // child is a sink. Strict < on the p-side, <= on the q-side.
    double delta = std::numeric_limits<double>::infinity();
    int u_out = -1;
    bool out_on_p_side = true;
    for (int u = ep; u != join; u = t.parent[u]) {
      if (t.is_source(u) && t.flow[u] < delta) {
        delta = t.flow[u];
        u_out = u;
        out_on_p_side = true;
      }
    }
    for (int u = eq; u != join; u = t.parent[u]) {
      if (!t.is_source(u) && t.flow[u] <= delta) {
        delta = t.flow[u];
        u_out = u;
        out_on_p_side = false;
      }
    }
    if (u_out < 0) throw std::runtime_error("solve_transport: unbounded cycle (corrupt basis)");
    delta = std::max(delta, 0.0);  // guard against rounding dust on degenerate flows

    // --- push delta around the cycle
    if (delta != 0.0) {
      for (int u = ep; u != join; u = t.parent[u]) t.flow[u] += t.is_source(u) ? -delta : delta;
      for (int u = eq; u != join; u = t.parent[u]) t.flow[u] += t.is_source(u) ? delta : -delta;
    }

    // --- replace the leaving edge by the entering arc
    const int pu = t.parent[u_out];
    remove_adj(t.adj[u_out], pu);
    remove_adj(t.adj[pu], u_out);

    const int z = out_on_p_side ? ep : eq;   // endpoint inside the detached subtree
    const int zp = out_on_p_side ? eq : ep;  // endpoint that stays attached

    // reverse parents along z -> ... -> u_out
    int cur = z;
    int prev_parent = t.parent[cur];
    double prev_flow = t.flow[cur];
    t.parent[z] = zp;
    t.flow[z] = delta;
    while (cur != u_out) {
      const int nxt = prev_parent;
      const int nxt_parent = t.parent[nxt];
      const double nxt_flow = t.flow[nxt];
      t.parent[nxt] = cur;
      t.flow[nxt] = prev_flow;
      cur = nxt;
      prev_parent = nxt_parent;
      prev_flow = nxt_flow;
    }
    t.adj[z].push_back(zp);
    t.adj[zp].push_back(z);

    // --- rebuild depth/potential on the re-hung subtree
    path_nodes.clear();
    path_nodes.push_back(z);
    t.depth[z] = t.depth[zp] + 1;
    {
      const int src = t.is_source(z) ? z : zp;
      const int snk = t.is_source(z) ? zp : z;
      t.pot[z] = cost[static_cast<std::size_t>(src) * n + (snk - m)] - t.pot[zp];
    }
    std::size_t head = 0;
    while (head < path_nodes.size()) {
      const int w = path_nodes[head++];
      for (int v2 : t.adj[w]) {
        if (v2 == t.parent[w]) continue;
        t.depth[v2] = t.depth[w] + 1;
        const int src = t.is_source(w) ? w : v2;
        const int snk = t.is_source(w) ? v2 : w;
        t.pot[v2] = cost[static_cast<std::size_t>(src) * n + (snk - m)] - t.pot[w];
        path_nodes.push_back(v2);
      }
    }
  }

  TransportResult res;
  res.supply = a;
  res.demand = b;
  res.u.assign(t.pot.begin(), t.pot.begin() + m);
  res.v.assign(t.pot.begin() + m, t.pot.end());
  double total = 0.0, comp = 0.0;
  for (int x2 = 0; x2 < N; ++x2) {
    if (t.parent[x2] < 0) continue;
    const int src = t.is_source(x2) ? x2 : t.parent[x2];
    const int snk = t.is_source(x2) ? t.parent[x2] : x2;
    const double term = t.flow[x2] * cost[static_cast<std::size_t>(src) * n + (snk - m)];
    const double yk = term - comp;
    const double tk = total + yk;
    comp = (tk - total) - yk;
    total = tk;
  }
  res.cost = total;
  return res;
}

}  // namespace masla
