#pragma once

// Brute-force reference implementations. Deliberately naive: they share no
// code with the library and are only usable on tiny inputs.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Small undirected graph described by an edge list over nodes 0..n-1.
struct SmallGraph {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // may hold loops and parallels

  std::vector<std::set<std::size_t>> neighbours() const {
    std::vector<std::set<std::size_t>> adj(n);
    for (auto [u, v] : edges) {
      if (u == v) continue;
      adj[u].insert(v);
      adj[v].insert(u);
    }
    return adj;
  }
};

// Every simple path from s to t, as node sequences.
inline std::vector<std::vector<std::size_t>> simple_paths(const SmallGraph& g, std::size_t s, std::size_t t) {
  const auto adj = g.neighbours();
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> path{s};
  std::vector<bool> on(g.n, false);
  on[s] = true;
  std::function<void(std::size_t)> dfs = [&](std::size_t v) {
    if (v == t) {
      out.push_back(path);
      return;
    }
    for (std::size_t w : adj[v]) {
      if (on[w]) continue;
      on[w] = true;
      path.push_back(w);
      dfs(w);
      path.pop_back();
      on[w] = false;
    }
  };
  dfs(s);
  return out;
}

inline std::vector<double> degree(const SmallGraph& g) {
  std::vector<double> d(g.n, 0.0);
  for (auto [u, v] : g.edges) {
    d[u] += 1.0;
    d[v] += 1.0;
  }
  return d;
}

inline std::vector<double> betweenness(const SmallGraph& g) {
  std::vector<double> bc(g.n, 0.0);
  for (std::size_t s = 0; s < g.n; ++s) {
    for (std::size_t t = s + 1; t < g.n; ++t) {
      auto paths = simple_paths(g, s, t);
      if (paths.empty()) continue;
      std::size_t shortest = SIZE_MAX;
      for (const auto& p : paths) shortest = std::min(shortest, p.size());
      std::vector<double> through(g.n, 0.0);
      double count = 0.0;
      for (const auto& p : paths) {
        if (p.size() != shortest) continue;
        count += 1.0;
        for (std::size_t i = 1; i + 1 < p.size(); ++i) through[p[i]] += 1.0;
      }
      for (std::size_t v = 0; v < g.n; ++v) bc[v] += through[v] / count;
    }
  }
  return bc;
}

// Wasserman-Faust closeness from path-enumeration distances.
inline std::vector<double> closeness(const SmallGraph& g) {
  std::vector<double> out(g.n, 0.0);
  if (g.n < 2) return out;
  for (std::size_t u = 0; u < g.n; ++u) {
    double reach = 0.0, total = 0.0;
    for (std::size_t v = 0; v < g.n; ++v) {
      if (v == u) continue;
      auto paths = simple_paths(g, u, v);
      if (paths.empty()) continue;
      std::size_t shortest = SIZE_MAX;
      for (const auto& p : paths) shortest = std::min(shortest, p.size());
      reach += 1.0;
      total += static_cast<double>(shortest - 1);
    }
    if (reach > 0) out[u] = (reach / static_cast<double>(g.n - 1)) * (reach / total);
  }
  return out;
}

// Principal eigenvector of each connected component's adjacency matrix via a
// dense symmetric eigensolver; the first component (by lowest node) with the
// largest eigenvalue wins, everything else scores 0. Unit L2 norm, positive.
inline std::vector<double> eigenvector(const SmallGraph& g) {
  const auto adj = g.neighbours();
  std::vector<int> comp(g.n, -1);
  std::vector<std::vector<std::size_t>> comps;
  for (std::size_t s = 0; s < g.n; ++s) {
    if (comp[s] >= 0) continue;
    comps.emplace_back();
    std::vector<std::size_t> stack{s};
    comp[s] = static_cast<int>(comps.size() - 1);
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      comps.back().push_back(v);
      for (auto w : adj[v]) {
        if (comp[w] < 0) {
          comp[w] = comp[s];
          stack.push_back(w);
        }
      }
    }
  }
  std::vector<double> best(g.n, 0.0);
  double best_lambda = -1.0;
  bool have = false;
  for (auto members : comps) {
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end());
    const auto m = static_cast<Eigen::Index>(members.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        if (adj[members[i]].contains(members[j])) a(i, j) = 1.0;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    const double lambda = es.eigenvalues()(m - 1);
    if (have && !(lambda > best_lambda + 1e-9)) continue;
    Eigen::VectorXd x = es.eigenvectors().col(m - 1);
    if (x.sum() < 0) x = -x;
    x.normalize();
    std::fill(best.begin(), best.end(), 0.0);
    for (Eigen::Index i = 0; i < m; ++i) best[members[i]] = x(i);
    best_lambda = lambda;
    have = true;
  }
  return best;
}

}  // namespace oracle
