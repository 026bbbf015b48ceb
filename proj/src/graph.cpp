#include "signet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "signet/errors.hpp"
#include "signet/influence.hpp"

namespace signet {

void SignedNetwork::validate() const {
  if (n < 1 || S.rows() != n || S.cols() != n)
    throw ConfigError("SignedNetwork: matrix shape does not match n");
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (!std::isfinite(S(i, j)))
        throw ConfigError("SignedNetwork: non-finite entry");
      if (i == j && S(i, j) != 0.0)
        throw ConfigError("SignedNetwork: nonzero diagonal entry");
    }
}

namespace {

// Arc u -> v in flow direction means S(v, u) != 0: u's opinion reaches v.
std::vector<std::vector<int>> flow_adjacency(const SignedNetwork& net) {
  std::vector<std::vector<int>> adj(net.n);
  for (int u = 0; u < net.n; ++u)
    for (int v = 0; v < net.n; ++v)
      if (v != u && net.S(v, u) != 0.0) adj[u].push_back(v);
  return adj;
}

}  // namespace

SccDecomposition scc_decompose(const SignedNetwork& net) {
  net.validate();
  const int n = net.n;
  const auto adj = flow_adjacency(net);

  // Iterative Tarjan. Components are emitted downstream-first, which is
  // exactly the canonic block order: arcs run from later components to
  // earlier ones and closed components (condensation sources) come last.
  std::vector<int> index(n, -1), lowlink(n, 0), comp_of(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  SccDecomposition dec;
  int next_index = 0;

  struct Frame {
    int v;
    std::size_t edge;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.edge < adj[f.v].size()) {
        const int w = adj[f.v][f.edge++];
        if (index[w] == -1) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          lowlink[f.v] = std::min(lowlink[f.v], index[w]);
        }
      } else {
        const int v = f.v;
        call.pop_back();
        if (!call.empty())
          lowlink[call.back().v] = std::min(lowlink[call.back().v], lowlink[v]);
        if (lowlink[v] == index[v]) {
          std::vector<int> comp;
          while (true) {
            const int w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp_of[w] = static_cast<int>(dec.components.size());
            comp.push_back(w);
            if (w == v) break;
          }
          std::sort(comp.begin(), comp.end());
          dec.components.push_back(std::move(comp));
        }
      }
    }
  }

  // Closed <=> no arc arrives from another component <=> the rows of the
  // component's nodes have no nonzero outside the component.
  dec.closed_flags.assign(dec.components.size(), true);
  for (int v = 0; v < n; ++v)
    for (int u = 0; u < n; ++u)
      if (u != v && net.S(v, u) != 0.0 && comp_of[u] != comp_of[v])
        dec.closed_flags[comp_of[v]] = false;

  // Stable partition: open components first, closed last. A closed component
  // has no incoming cross arc, so moving it later cannot break the
  // later-to-earlier arc direction the emission order established.
  std::vector<std::size_t> order;
  order.reserve(dec.components.size());
  for (std::size_t k = 0; k < dec.components.size(); ++k)
    if (!dec.closed_flags[k]) order.push_back(k);
  for (std::size_t k = 0; k < dec.components.size(); ++k)
    if (dec.closed_flags[k]) order.push_back(k);
  std::vector<std::vector<int>> comps;
  std::vector<bool> flags;
  comps.reserve(order.size());
  flags.reserve(order.size());
  for (std::size_t k : order) {
    comps.push_back(std::move(dec.components[k]));
    flags.push_back(dec.closed_flags[k]);
  }
  dec.components = std::move(comps);
  dec.closed_flags = std::move(flags);

  dec.topo_order.resize(dec.components.size());
  for (std::size_t k = 0; k < dec.components.size(); ++k)
    dec.topo_order[k] = static_cast<int>(k);
  return dec;
}

BalanceResult is_structurally_balanced(const SignedNetwork& net) {
  std::vector<int> all(static_cast<std::size_t>(net.n));
  for (int i = 0; i < net.n; ++i) all[static_cast<std::size_t>(i)] = i;
  return is_structurally_balanced(net, all);
}

BalanceResult is_structurally_balanced(const SignedNetwork& net,
                                       const std::vector<int>& nodes) {
  net.validate();
  if (nodes.empty())
    throw ConfigError("is_structurally_balanced: empty node set");
  for (int v : nodes)
    if (v < 0 || v >= net.n)
      throw ConfigError("is_structurally_balanced: node out of range");

  // A pair with strictly opposite signs can satisfy no bipartition: within a
  // set both entries must be >= 0, across sets both <= 0.
  for (std::size_t a = 0; a < nodes.size(); ++a)
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      const int i = nodes[a], j = nodes[b];
      if (net.S(i, j) * net.S(j, i) < 0.0) {
        BalanceResult res;
        res.balanced = false;
        res.witness = BalanceWitness{BalanceWitness::Kind::opposite_pair, {i, j}};
        return res;
      }
    }

  // Each linked pair now carries a single sign; 2-color the undirected sign
  // graph, one connected component at a time.
  std::vector<int> color(net.n, 0), parent(net.n, -1);
  std::vector<int> set_pos, set_neg;
  for (int root : nodes) {
    if (color[root] != 0) continue;
    color[root] = 1;
    std::queue<int> bfs;
    bfs.push(root);
    while (!bfs.empty()) {
      const int v = bfs.front();
      bfs.pop();
      for (int w : nodes) {
        if (w == v) continue;
        const double s = net.S(v, w) + net.S(w, v);  // same sign or one zero
        if (net.S(v, w) == 0.0 && net.S(w, v) == 0.0) continue;
        const int want = s > 0.0 ? color[v] : -color[v];
        if (color[w] == 0) {
          color[w] = want;
          parent[w] = v;
          bfs.push(w);
        } else if (color[w] != want) {
          // Coloring conflict: the tree paths v->root and w->root plus edge
          // (v,w) close a cycle with an odd number of negative edges.
          BalanceResult res;
          res.balanced = false;
          std::vector<int> pv{v}, pw{w};
          for (int x = v; parent[x] != -1; x = parent[x]) pv.push_back(parent[x]);
          for (int x = w; parent[x] != -1; x = parent[x]) pw.push_back(parent[x]);
          // Trim the common tail above the lowest common ancestor.
          while (pv.size() > 1 && pw.size() > 1 &&
                 pv[pv.size() - 2] == pw[pw.size() - 2]) {
            pv.pop_back();
            pw.pop_back();
          }
          std::vector<int> cycle(pv.begin(), pv.end());
          for (auto it = pw.rbegin() + 1; it != pw.rend(); ++it)
            cycle.push_back(*it);
          res.witness =
              BalanceWitness{BalanceWitness::Kind::odd_negative_cycle, cycle};
          return res;
        }
      }
    }
  }

  for (int v : nodes) (color[v] > 0 ? set_pos : set_neg).push_back(v);
  BalanceResult res;
  res.balanced = true;
  res.bipartition = {set_pos, set_neg};
  return res;
}

SignedNetwork gauge_transform(
    const SignedNetwork& net,
    const std::pair<std::vector<int>, std::vector<int>>& bipartition) {
  net.validate();
  std::vector<double> D(net.n, 0.0);
  for (int v : bipartition.first) D.at(v) = 1.0;
  for (int v : bipartition.second) {
    if (D.at(v) != 0.0)
      throw ConfigError("gauge_transform: bipartition sets overlap");
    D[v] = -1.0;
  }
  SignedNetwork out = net;
  for (int v = 0; v < net.n; ++v)
    for (int u = 0; u < net.n; ++u) {
      if (D[v] == 0.0 || D[u] == 0.0) continue;
      out.S(v, u) = D[v] * net.S(v, u) * D[u];
      if (out.S(v, u) < 0.0)
        throw ConfigError(
            "gauge_transform: bipartition inconsistent with balance "
            "(negative entry survives)");
    }
  return out;
}

std::vector<int> canonic_permutation(const SccDecomposition& dec) {
  std::vector<int> perm;
  for (int k : dec.topo_order)
    for (int v : dec.components.at(k)) perm.push_back(v);
  return perm;
}

std::vector<std::pair<double, double>> gershgorin_discs(
    const InfluenceMatrix& W) {
  std::vector<std::pair<double, double>> discs;
  discs.reserve(W.n);
  for (int i = 0; i < W.n; ++i) {
    double radius = 0.0;
    for (int j = 0; j < W.n; ++j)
      if (j != i) radius += std::abs(W.W(i, j));
    discs.emplace_back(W.W(i, i), radius);
  }
  return discs;
}

}  // namespace signet
