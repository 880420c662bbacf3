#pragma once

// Degree, betweenness, closeness and eigenvector centrality, plus the
// relevance score (sum of min-max normalised degree, betweenness and
// eigenvector). Path-based metrics use the undirected simple view of the
// graph: directions dropped, parallel edges collapsed, self-loops ignored.

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "graphled/error.hpp"
#include "graphled/format.hpp"
#include "graphled/graph.hpp"

namespace graphled {

// Dense re-indexing of live nodes, ascending by NodeId.
struct SimpleGraph {
  std::vector<NodeId> ids;
  std::vector<std::vector<std::size_t>> adj;  // sorted, no duplicates, no self-loops

  std::size_t size() const noexcept { return ids.size(); }
  std::size_t edge_count() const noexcept {
    std::size_t twice = 0;
    for (const auto& a : adj) twice += a.size();
    return twice / 2;
  }
};

inline SimpleGraph undirected_view(const GraphData& d) {
  SimpleGraph sg;
  std::vector<std::size_t> index(d.nodes.size(), 0);
  for (const auto& n : d.nodes) {
    if (!n) continue;
    index[n->id] = sg.ids.size();
    sg.ids.push_back(n->id);
  }
  sg.adj.resize(sg.ids.size());
  for (const auto& e : d.edges) {
    if (!e || e->src == e->dst) continue;
    const auto a = index[e->src], b = index[e->dst];
    sg.adj[a].push_back(b);
    sg.adj[b].push_back(a);
  }
  for (auto& a : sg.adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return sg;
}

inline SimpleGraph undirected_view(const PropertyGraph& g) {
  return g.read([](const GraphData& d) { return undirected_view(d); });
}

// In-degree + out-degree on the directed multigraph; a self-loop adds 2.
inline std::map<NodeId, std::size_t> degree_centrality(const PropertyGraph& g) {
  return g.read([](const GraphData& d) {
    std::map<NodeId, std::size_t> out;
    for (const auto& n : d.nodes) {
      if (n) out[n->id] = d.out[n->id].size() + d.in[n->id].size();
    }
    return out;
  });
}

namespace detail {

// Brandes accumulation from one source, added into `acc`.
inline void brandes_from(const SimpleGraph& sg, std::size_t s, std::vector<double>& acc,
                         std::vector<double>& sigma, std::vector<long>& dist, std::vector<double>& delta,
                         std::vector<std::size_t>& order) {
  std::fill(sigma.begin(), sigma.end(), 0.0);
  std::fill(dist.begin(), dist.end(), -1);
  std::fill(delta.begin(), delta.end(), 0.0);
  order.clear();
  sigma[s] = 1.0;
  dist[s] = 0;
  std::deque<std::size_t> queue{s};
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    order.push_back(v);
    for (std::size_t w : sg.adj[v]) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
      if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t w = *it;
    for (std::size_t v : sg.adj[w]) {
      if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
    }
    if (w != s) acc[w] += delta[w];
  }
}

}  // namespace detail

// Sources are processed in fixed blocks whose partial sums are combined in
// block order, so every worker count yields bit-identical results.
inline std::vector<double> betweenness(const SimpleGraph& sg, unsigned workers = 1) {
  constexpr std::size_t kBlock = 32;
  const std::size_t n = sg.size();
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  const std::size_t wave = std::max(1u, workers);
  std::vector<std::vector<double>> partial(wave);
  std::vector<double> total(n, 0.0);
  auto run = [&](std::size_t block, std::vector<double>& acc) {
    acc.assign(n, 0.0);
    std::vector<double> sigma(n), delta(n);
    std::vector<long> dist(n);
    std::vector<std::size_t> order;
    order.reserve(n);
    for (std::size_t s = block * kBlock; s < std::min(n, (block + 1) * kBlock); ++s) {
      detail::brandes_from(sg, s, acc, sigma, dist, delta, order);
    }
  };
  for (std::size_t first = 0; first < blocks; first += wave) {
    const std::size_t count = std::min(wave, blocks - first);
    if (count == 1) {
      run(first, partial[0]);
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t k = 0; k < count; ++k) pool.emplace_back([&, k] { run(first + k, partial[k]); });
    }
    for (std::size_t k = 0; k < count; ++k) {
      for (std::size_t v = 0; v < n; ++v) total[v] += partial[k][v];
    }
  }
  // Each unordered pair was counted from both ends.
  for (auto& x : total) x /= 2.0;
  return total;
}

inline std::map<NodeId, double> betweenness_centrality(const PropertyGraph& g, unsigned workers = 1) {
  const auto sg = undirected_view(g);
  const auto values = betweenness(sg, workers);
  std::map<NodeId, double> out;
  for (std::size_t i = 0; i < sg.size(); ++i) out[sg.ids[i]] = values[i];
  return out;
}

// Wasserman-Faust closeness: ((r-1)/(n-1)) * ((r-1)/sum_d), r counting the
// node itself. Isolated nodes score 0.
inline std::vector<double> closeness(const SimpleGraph& sg) {
  const std::size_t n = sg.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  std::vector<long> dist(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::deque<std::size_t> queue{s};
    std::size_t reached = 1;
    double total = 0.0;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      for (std::size_t w : sg.adj[v]) {
        if (dist[w] >= 0) continue;
        dist[w] = dist[v] + 1;
        total += static_cast<double>(dist[w]);
        ++reached;
        queue.push_back(w);
      }
    }
    if (reached > 1) {
      const double r1 = static_cast<double>(reached - 1);
      out[s] = (r1 / static_cast<double>(n - 1)) * (r1 / total);
    }
  }
  return out;
}

inline std::map<NodeId, double> closeness_centrality(const PropertyGraph& g) {
  const auto sg = undirected_view(g);
  const auto values = closeness(sg);
  std::map<NodeId, double> out;
  for (std::size_t i = 0; i < sg.size(); ++i) out[sg.ids[i]] = values[i];
  return out;
}

struct EigenvectorOptions {
  double tolerance = 1e-8;
  std::size_t max_iterations = 1000;
};

struct EigenvectorResult {
  std::vector<double> scores;  // per SimpleGraph index
  bool converged = false;
  std::size_t iterations = 0;
  double eigenvalue = 0.0;
};

// Power iteration on A + I (same eigenvectors as A; the shift keeps bipartite
// graphs from oscillating), uniform positive start, L2 normalisation each
// step. Runs per connected component and reports the component with the
// largest eigenvalue; other nodes score 0. Throws Errc::no_edges.
inline EigenvectorResult eigenvector(const SimpleGraph& sg, const EigenvectorOptions& opts = {}) {
  const std::size_t n = sg.size();
  if (sg.edge_count() == 0) throw Error(Errc::no_edges, "eigenvector centrality needs at least one edge");

  std::vector<long> comp(n, -1);
  std::vector<std::vector<std::size_t>> components;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    const long c = static_cast<long>(components.size());
    components.emplace_back();
    std::deque<std::size_t> queue{s};
    comp[s] = c;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      components.back().push_back(v);
      for (std::size_t w : sg.adj[v]) {
        if (comp[w] < 0) {
          comp[w] = c;
          queue.push_back(w);
        }
      }
    }
  }

  EigenvectorResult best;
  bool have_best = false;
  std::vector<double> x(n, 0.0), next(n, 0.0);
  for (const auto& members : components) {
    if (members.size() < 2) continue;
    const double start = 1.0 / std::sqrt(static_cast<double>(members.size()));
    for (std::size_t v : members) x[v] = start;
    bool converged = false;
    std::size_t iter = 0;
    while (iter < opts.max_iterations) {
      ++iter;
      double norm = 0.0;
      for (std::size_t v : members) {
        double sum = x[v];
        for (std::size_t w : sg.adj[v]) sum += x[w];
        next[v] = sum;
        norm += sum * sum;
      }
      norm = std::sqrt(norm);
      double change = 0.0;
      for (std::size_t v : members) {
        next[v] /= norm;
        change = std::max(change, std::abs(next[v] - x[v]));
        x[v] = next[v];
      }
      if (change < opts.tolerance) {
        converged = true;
        break;
      }
    }
    // Rayleigh quotient of A (x has unit norm).
    double lambda = 0.0;
    for (std::size_t v : members) {
      double ax = 0.0;
      for (std::size_t w : sg.adj[v]) ax += x[w];
      lambda += x[v] * ax;
    }
    if (!have_best || lambda > best.eigenvalue + 1e-9) {
      best.scores.assign(n, 0.0);
      for (std::size_t v : members) best.scores[v] = x[v];
      best.converged = converged;
      best.iterations = iter;
      best.eigenvalue = lambda;
      have_best = true;
    }
    for (std::size_t v : members) x[v] = 0.0;
  }
  return best;
}

struct EigenvectorCentrality {
  std::map<NodeId, double> scores;
  bool converged = false;
  std::size_t iterations = 0;
};

inline EigenvectorCentrality eigenvector_centrality(const PropertyGraph& g, const EigenvectorOptions& opts = {}) {
  const auto sg = undirected_view(g);
  const auto r = eigenvector(sg, opts);
  EigenvectorCentrality out;
  out.converged = r.converged;
  out.iterations = r.iterations;
  for (std::size_t i = 0; i < sg.size(); ++i) out.scores[sg.ids[i]] = r.scores[i];
  return out;
}

struct RelevanceOptions {
  // false: plain sum of the raw metric values.
  bool min_max_normalize = true;
};

// Min-max normalisation to [0,1]; a constant metric maps to all zeros.
// Spans within rounding noise of the magnitude count as constant.
inline std::vector<double> min_max_normalize(const std::vector<double>& v) {
  std::vector<double> out(v.size(), 0.0);
  if (v.empty()) return out;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double span = *hi - *lo;
  if (span <= 1e-9 * std::max({1.0, std::abs(*lo), std::abs(*hi)})) return out;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - *lo) / span;
  return out;
}

inline std::vector<double> relevance(const std::vector<double>& degree, const std::vector<double>& betweenness_values,
                                     const std::vector<double>& eigen, const RelevanceOptions& opts = {}) {
  std::vector<double> out(degree.size(), 0.0);
  if (opts.min_max_normalize) {
    const auto a = min_max_normalize(degree), b = min_max_normalize(betweenness_values), c = min_max_normalize(eigen);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i] + c[i];
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = degree[i] + betweenness_values[i] + eigen[i];
  }
  return out;
}

struct CentralityRow {
  NodeId node_id = 0;
  Label label = Label::synthetic;
  std::size_t degree = 0;
  double betweenness = 0.0;
  double closeness = 0.0;
  double eigenvector = 0.0;
  double relevance = 0.0;
};

struct CentralityTable {
  std::vector<CentralityRow> rows;  // ascending node_id
  bool eigenvector_converged = false;
};

struct CentralityOptions {
  unsigned workers = 1;
  EigenvectorOptions eigen;
  RelevanceOptions relevance;
};

inline CentralityTable compute_centrality(const PropertyGraph& g, const CentralityOptions& opts = {}) {
  CentralityTable table;
  std::vector<Label> labels;
  std::vector<double> degree;
  const SimpleGraph sg = g.read([&](const GraphData& d) {
    for (const auto& n : d.nodes) {
      if (!n) continue;
      labels.push_back(n->label);
      degree.push_back(static_cast<double>(d.out[n->id].size() + d.in[n->id].size()));
    }
    return undirected_view(d);
  });
  const auto btw = betweenness(sg, opts.workers);
  const auto cls = closeness(sg);
  std::vector<double> eig(sg.size(), 0.0);
  if (sg.edge_count() > 0) {
    auto r = eigenvector(sg, opts.eigen);
    eig = std::move(r.scores);
    table.eigenvector_converged = r.converged;
  }
  const auto rel = relevance(degree, btw, eig, opts.relevance);
  table.rows.reserve(sg.size());
  for (std::size_t i = 0; i < sg.size(); ++i) {
    table.rows.push_back({sg.ids[i], labels[i], static_cast<std::size_t>(degree[i]), btw[i], cls[i], eig[i], rel[i]});
  }
  return table;
}

// Relevance per node; a graph without edges contributes zero eigenvector.
inline std::map<NodeId, double> relevance_scores(const PropertyGraph& g, const RelevanceOptions& opts = {}) {
  CentralityOptions co;
  co.relevance = opts;
  std::map<NodeId, double> out;
  for (const auto& row : compute_centrality(g, co).rows) out[row.node_id] = row.relevance;
  return out;
}

enum class Metric { degree, betweenness, closeness, eigenvector, relevance };

inline std::optional<Metric> parse_metric(std::string_view s) {
  if (s == "degree") return Metric::degree;
  if (s == "betweenness") return Metric::betweenness;
  if (s == "closeness") return Metric::closeness;
  if (s == "eigenvector") return Metric::eigenvector;
  if (s == "relevance") return Metric::relevance;
  return std::nullopt;
}

inline double metric_value(const CentralityRow& r, Metric m) {
  switch (m) {
    case Metric::degree: return static_cast<double>(r.degree);
    case Metric::betweenness: return r.betweenness;
    case Metric::closeness: return r.closeness;
    case Metric::eigenvector: return r.eigenvector;
    case Metric::relevance: return r.relevance;
  }
  return 0.0;
}

// Rows sorted by the metric, highest first (ties by node id), truncated to top.
inline std::vector<CentralityRow> rank_by(const CentralityTable& t, Metric m, std::size_t top = 0) {
  auto rows = t.rows;
  std::stable_sort(rows.begin(), rows.end(),
                   [m](const CentralityRow& a, const CentralityRow& b) { return metric_value(a, m) > metric_value(b, m); });
  if (top > 0 && rows.size() > top) rows.resize(top);
  return rows;
}

inline std::string to_csv(const std::vector<CentralityRow>& rows) {
  std::string out = "node_id,label,degree,betweenness,closeness,eigenvector,relevance\n";
  for (const auto& r : rows) {
    out += std::to_string(r.node_id) + ',' + std::string(label_name(r.label)) + ',' + std::to_string(r.degree) + ',' +
           format_double(r.betweenness) + ',' + format_double(r.closeness) + ',' + format_double(r.eigenvector) + ',' +
           format_double(r.relevance) + '\n';
  }
  return out;
}

inline json to_json(const CentralityRow& r) {
  return {{"node_id", r.node_id},         {"label", label_name(r.label)},   {"degree", r.degree},
          {"betweenness", r.betweenness}, {"closeness", r.closeness},       {"eigenvector", r.eigenvector},
          {"relevance", r.relevance}};
}

}  // namespace graphled
