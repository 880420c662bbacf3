#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "graphled/centrality.hpp"
#include "oracles/graphs.hpp"

using namespace graphled;

namespace {

oracle::SmallGraph random_small_graph(std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> nodes(1, 8);
  oracle::SmallGraph g;
  g.n = nodes(rng);
  std::uniform_int_distribution<std::size_t> pick(0, g.n - 1);
  std::uniform_int_distribution<std::size_t> count(0, 2 * g.n);
  const std::size_t m = count(rng);
  for (std::size_t i = 0; i < m; ++i) g.edges.emplace_back(pick(rng), pick(rng));
  // Occasional explicit loop and parallel edge.
  if (rng() % 4 == 0) {
    const auto v = pick(rng);
    g.edges.emplace_back(v, v);
  }
  if (!g.edges.empty() && rng() % 3 == 0) g.edges.push_back(g.edges.front());
  return g;
}

PropertyGraph to_property_graph(const oracle::SmallGraph& s) {
  PropertyGraph g;
  for (std::size_t i = 0; i < s.n; ++i) g.create_node(Label::synthetic, {{"key", "n" + std::to_string(i)}});
  for (auto [u, v] : s.edges) g.create_edge(u, v, "LINK");
  return g;
}

oracle::SmallGraph make(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges) {
  return {n, std::move(edges)};
}

// Components with at least one edge. With more than one, equal spectral
// radii make the eigenvector winner depend on node numbering.
std::size_t edge_components(const oracle::SmallGraph& s) {
  const auto adj = s.neighbours();
  std::vector<bool> seen(s.n, false);
  std::size_t count = 0;
  for (std::size_t v = 0; v < s.n; ++v) {
    if (seen[v] || adj[v].empty()) continue;
    ++count;
    std::vector<std::size_t> stack{v};
    seen[v] = true;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (auto w : adj[u]) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
  }
  return count;
}

std::vector<double> oracle_min_max(const std::vector<double>& v) {
  std::vector<double> out(v.size(), 0.0);
  double lo = v.front(), hi = v.front();
  for (double x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (hi - lo <= 1e-9 * std::max({1.0, std::abs(lo), std::abs(hi)})) return out;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - lo) / (hi - lo);
  return out;
}

}  // namespace

TEST(Centrality, MatchesBruteForceOnRandomGraphs) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_small_graph(rng);
    const auto g = to_property_graph(s);
    const auto table = compute_centrality(g);
    ASSERT_EQ(table.rows.size(), s.n);
    const auto deg = oracle::degree(s);
    const auto btw = oracle::betweenness(s);
    const auto cls = oracle::closeness(s);
    const bool has_simple_edge =
        std::any_of(s.edges.begin(), s.edges.end(), [](const auto& e) { return e.first != e.second; });
    const auto eig = has_simple_edge ? oracle::eigenvector(s) : std::vector<double>(s.n, 0.0);
    for (std::size_t i = 0; i < s.n; ++i) {
      const auto& r = table.rows[i];
      ASSERT_EQ(r.node_id, i);
      EXPECT_EQ(static_cast<double>(r.degree), deg[i]) << "trial " << trial << " node " << i;
      EXPECT_NEAR(r.betweenness, btw[i], 1e-12) << "trial " << trial << " node " << i;
      EXPECT_NEAR(r.closeness, cls[i], 1e-12) << "trial " << trial << " node " << i;
      EXPECT_NEAR(r.eigenvector, eig[i], 1e-6) << "trial " << trial << " node " << i;
    }
    const auto a = oracle_min_max(deg), b = oracle_min_max(btw), c = oracle_min_max(eig);
    for (std::size_t i = 0; i < s.n; ++i) {
      EXPECT_NEAR(table.rows[i].relevance, a[i] + b[i] + c[i], 1e-5) << "trial " << trial << " node " << i;
    }
  }
}

TEST(Centrality, CompleteGraphEigenvector) {
  const auto g = to_property_graph(make(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
  const auto e = eigenvector_centrality(g);
  EXPECT_TRUE(e.converged);
  for (const auto& [id, v] : e.scores) EXPECT_NEAR(v, 0.5, 1e-9) << id;
}

TEST(Centrality, PathCentreBetweenness) {
  const auto g = to_property_graph(make(3, {{0, 1}, {1, 2}}));
  const auto b = betweenness_centrality(g);
  EXPECT_DOUBLE_EQ(b.at(0), 0.0);
  EXPECT_DOUBLE_EQ(b.at(1), 1.0);
  EXPECT_DOUBLE_EQ(b.at(2), 0.0);
}

TEST(Centrality, TriangleCloseness) {
  const auto g = to_property_graph(make(3, {{0, 1}, {1, 2}, {2, 0}}));
  for (const auto& [id, c] : closeness_centrality(g)) EXPECT_DOUBLE_EQ(c, 1.0) << id;
}

TEST(Centrality, IsolatedNodeClosenessIsZero) {
  const auto g = to_property_graph(make(3, {{0, 1}}));
  const auto c = closeness_centrality(g);
  EXPECT_DOUBLE_EQ(c.at(2), 0.0);
  EXPECT_DOUBLE_EQ(c.at(0), 0.5);
}

TEST(Centrality, StarHubRanksFirst) {
  oracle::SmallGraph s{6, {}};
  for (std::size_t leaf = 1; leaf < 6; ++leaf) s.edges.emplace_back(0, leaf);
  const auto g = to_property_graph(s);
  const auto table = compute_centrality(g);
  const auto ranked = rank_by(table, Metric::relevance);
  EXPECT_EQ(ranked.front().node_id, 0u);
  EXPECT_DOUBLE_EQ(ranked.front().relevance, 3.0);
  for (std::size_t i = 1; i < ranked.size(); ++i) {
    EXPECT_DOUBLE_EQ(ranked[i].betweenness, 0.0);
    EXPECT_DOUBLE_EQ(ranked[i].relevance, 0.0);
  }
  EXPECT_EQ(rank_by(table, Metric::degree, 2).size(), 2u);
}

TEST(Centrality, SingleEdgeTies) {
  const auto g = to_property_graph(make(2, {{0, 1}}));
  const auto rel = relevance_scores(g);
  EXPECT_DOUBLE_EQ(rel.at(0), rel.at(1));
}

TEST(Centrality, PermutationEquivariant) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_small_graph(rng);
    std::vector<std::size_t> perm(s.n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    oracle::SmallGraph t{s.n, {}};
    for (auto [u, v] : s.edges) t.edges.emplace_back(perm[u], perm[v]);
    std::shuffle(t.edges.begin(), t.edges.end(), rng);
    const auto a = compute_centrality(to_property_graph(s));
    const auto b = compute_centrality(to_property_graph(t));
    for (std::size_t i = 0; i < s.n; ++i) {
      const auto& x = a.rows[i];
      const auto& y = b.rows[perm[i]];
      EXPECT_EQ(x.degree, y.degree);
      EXPECT_NEAR(x.betweenness, y.betweenness, 1e-12);
      EXPECT_NEAR(x.closeness, y.closeness, 1e-12);
      if (edge_components(s) <= 1) EXPECT_NEAR(x.eigenvector, y.eigenvector, 1e-6);
    }
  }
}

TEST(Centrality, WorkerCountDoesNotChangeBetweenness) {
  std::mt19937 rng(99);
  PropertyGraph g;
  const std::size_t n = 300;
  for (std::size_t i = 0; i < n; ++i) g.create_node(Label::synthetic);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (int i = 0; i < 900; ++i) g.create_edge(pick(rng), pick(rng), "LINK");
  const auto sg = undirected_view(g);
  const auto one = betweenness(sg, 1);
  for (unsigned w : {2u, 3u, 8u}) EXPECT_EQ(betweenness(sg, w), one) << w;
}

TEST(Centrality, EigenvectorNeedsEdges) {
  PropertyGraph g;
  g.create_node(Label::document);
  g.create_node(Label::document);
  try {
    eigenvector_centrality(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::no_edges);
  }
  // The table degrades to zero eigenvector instead of throwing.
  const auto table = compute_centrality(g);
  for (const auto& r : table.rows) EXPECT_EQ(r.eigenvector, 0.0);
}

TEST(Centrality, DeletedNodesAreSkipped) {
  PropertyGraph g;
  for (int i = 0; i < 4; ++i) g.create_node(Label::synthetic);
  g.create_edge(0, 1, "LINK");
  g.create_edge(1, 3, "LINK");
  g.delete_node(2);
  const auto table = compute_centrality(g);
  ASSERT_EQ(table.rows.size(), 3u);
  EXPECT_EQ(table.rows[2].node_id, 3u);
  EXPECT_DOUBLE_EQ(table.rows[1].betweenness, 1.0);
}

TEST(Centrality, CsvLayout) {
  const auto g = to_property_graph(make(3, {{0, 1}, {1, 2}}));
  const auto csv = to_csv(rank_by(compute_centrality(g), Metric::betweenness, 1));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "node_id,label,degree,betweenness,closeness,eigenvector,relevance");
  EXPECT_EQ(csv.substr(csv.find('\n') + 1, 14), "1,synthetic,2,");
  EXPECT_EQ(parse_metric("closeness"), Metric::closeness);
  EXPECT_FALSE(parse_metric("pagerank"));
}
