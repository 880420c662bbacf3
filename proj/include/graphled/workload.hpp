#pragma once

// Synthetic graph workload: subgraph pattern generators, read probes and a
// concurrent load driver that reports per-pattern latency statistics.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "graphled/error.hpp"
#include "graphled/format.hpp"
#include "graphled/graph.hpp"

namespace graphled {

using Rng = std::mt19937_64;

enum class Pattern {
  fat_node_append,
  nary_tree,
  merge_write,
  random_linkage,
  hub_spoke,
  raw_write,
  index_heavy,
  aggregate_read,
  random_access_read,
  long_path_read,
};

inline constexpr std::array<Pattern, 10> kAllPatterns{
    Pattern::fat_node_append, Pattern::nary_tree,   Pattern::merge_write,    Pattern::random_linkage,
    Pattern::hub_spoke,       Pattern::raw_write,   Pattern::index_heavy,    Pattern::aggregate_read,
    Pattern::random_access_read, Pattern::long_path_read};

inline constexpr std::string_view pattern_name(Pattern p) noexcept {
  switch (p) {
    case Pattern::fat_node_append: return "fat_node_append";
    case Pattern::nary_tree: return "nary_tree";
    case Pattern::merge_write: return "merge_write";
    case Pattern::random_linkage: return "random_linkage";
    case Pattern::hub_spoke: return "hub_spoke";
    case Pattern::raw_write: return "raw_write";
    case Pattern::index_heavy: return "index_heavy";
    case Pattern::aggregate_read: return "aggregate_read";
    case Pattern::random_access_read: return "random_access_read";
    case Pattern::long_path_read: return "long_path_read";
  }
  return "raw_write";
}

inline std::optional<Pattern> parse_pattern(std::string_view name) noexcept {
  for (auto p : kAllPatterns) {
    if (pattern_name(p) == name) return p;
  }
  return std::nullopt;
}

inline constexpr bool is_write(Pattern p) noexcept {
  return p != Pattern::aggregate_read && p != Pattern::random_access_read && p != Pattern::long_path_read;
}

struct SubgraphStats {
  std::size_t nodes_created = 0;
  std::size_t edges_created = 0;
  std::size_t merges_matched = 0;
  std::optional<NodeId> root;

  SubgraphStats& operator+=(const SubgraphStats& o) {
    nodes_created += o.nodes_created;
    edges_created += o.edges_created;
    merges_matched += o.merges_matched;
    return *this;
  }
};

namespace detail {

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline std::string random_text(Rng& rng, std::size_t length) {
  static constexpr char kAlphabet[] = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  std::string s(length, 'a');
  for (auto& c : s) c = kAlphabet[uniform(rng, 0, sizeof(kAlphabet) - 2)];
  return s;
}

// Node key "<prefix><n>" so generated nodes are identifiable independent of
// the ids the store hands out.
inline Props keyed(const std::string& prefix, std::size_t n, std::string_view kind) {
  return {{"key", prefix + std::to_string(n)}, {"kind", std::string(kind)}};
}

}  // namespace detail

// One hub plus `leaves` leaves, edges hub -> leaf.
inline SubgraphStats gen_hub_spoke(PropertyGraph& g, Rng& rng, std::size_t leaves, const std::string& prefix = "h") {
  (void)rng;
  SubgraphStats s;
  const NodeId hub = g.create_node(Label::synthetic, detail::keyed(prefix, 0, "hub"));
  s.root = hub;
  ++s.nodes_created;
  for (std::size_t i = 1; i <= leaves; ++i) {
    const NodeId leaf = g.create_node(Label::synthetic, detail::keyed(prefix, i, "leaf"));
    g.create_edge(hub, leaf, "SPOKE");
    ++s.nodes_created;
    ++s.edges_created;
  }
  return s;
}

// Root plus exactly `depth` levels; every node of a level draws its child
// count uniformly from [1, branching], level by level in creation order.
inline SubgraphStats gen_nary_tree(PropertyGraph& g, Rng& rng, std::size_t branching, std::size_t depth,
                                   const std::string& prefix = "t") {
  if (depth < 1) throw Error(Errc::depth_zero, "tree depth must be >= 1");
  if (branching < 1) throw Error(Errc::invalid_argument, "branching must be >= 1");
  SubgraphStats s;
  std::size_t serial = 0;
  std::vector<NodeId> level{g.create_node(Label::synthetic, detail::keyed(prefix, serial++, "tree"))};
  s.root = level.front();
  ++s.nodes_created;
  for (std::size_t d = 0; d < depth; ++d) {
    std::vector<NodeId> next;
    for (NodeId parent : level) {
      const std::size_t children = detail::uniform(rng, 1, branching);
      for (std::size_t c = 0; c < children; ++c) {
        const NodeId child = g.create_node(Label::synthetic, detail::keyed(prefix, serial++, "tree"));
        g.create_edge(parent, child, "CHILD");
        next.push_back(child);
        ++s.nodes_created;
        ++s.edges_created;
      }
    }
    level = std::move(next);
  }
  return s;
}

// `nodes` new nodes and `edges` edges between uniformly drawn pairs of them.
inline SubgraphStats gen_raw_write(PropertyGraph& g, Rng& rng, std::size_t nodes, std::size_t edges,
                                   const std::string& prefix = "r") {
  SubgraphStats s;
  std::vector<NodeId> created;
  created.reserve(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    created.push_back(g.create_node(Label::synthetic, detail::keyed(prefix, i, "raw")));
    ++s.nodes_created;
  }
  if (created.empty()) return s;
  for (std::size_t i = 0; i < edges; ++i) {
    const NodeId a = created[detail::uniform(rng, 0, created.size() - 1)];
    const NodeId b = created[detail::uniform(rng, 0, created.size() - 1)];
    g.create_edge(a, b, "RAW", {{"w", std::to_string(detail::uniform(rng, 0, 999))}});
    ++s.edges_created;
  }
  return s;
}

// `edges` new edges between distinct nodes drawn uniformly from `pool`.
inline SubgraphStats gen_random_linkage(PropertyGraph& g, Rng& rng, std::size_t edges, const std::vector<NodeId>& pool) {
  if (pool.size() < 2) throw Error(Errc::insufficient_nodes, "random linkage needs at least two nodes");
  SubgraphStats s;
  for (std::size_t i = 0; i < edges; ++i) {
    const std::size_t a = detail::uniform(rng, 0, pool.size() - 1);
    std::size_t b = detail::uniform(rng, 0, pool.size() - 2);
    if (b >= a) ++b;
    g.create_edge(pool[a], pool[b], "LINK");
    ++s.edges_created;
  }
  return s;
}

// Pool = every live node, ascending id.
inline SubgraphStats gen_random_linkage(PropertyGraph& g, Rng& rng, std::size_t edges) {
  std::vector<NodeId> pool = g.read([](const GraphData& d) {
    std::vector<NodeId> ids;
    for (const auto& n : d.nodes) {
      if (n) ids.push_back(n->id);
    }
    return ids;
  });
  return gen_random_linkage(g, rng, edges, pool);
}

inline std::string index_key(std::size_t i) { return "ix" + std::to_string(i); }

// Nodes carrying k indexable attributes ix0..ix{k-1}.
inline SubgraphStats gen_index_heavy(PropertyGraph& g, Rng& rng, std::size_t nodes, std::size_t k = 10,
                                     const std::string& prefix = "x") {
  SubgraphStats s;
  for (std::size_t i = 0; i < nodes; ++i) {
    Props props = detail::keyed(prefix, i, "indexed");
    for (std::size_t p = 0; p < k; ++p) props[index_key(p)] = std::to_string(detail::uniform(rng, 0, 99));
    g.create_node(Label::synthetic, std::move(props));
    ++s.nodes_created;
  }
  return s;
}

// Nodes with a single `length`-character payload property.
inline SubgraphStats gen_fat_node(PropertyGraph& g, Rng& rng, std::size_t nodes = 1, std::size_t length = 4096,
                                  const std::string& prefix = "f") {
  SubgraphStats s;
  for (std::size_t i = 0; i < nodes; ++i) {
    Props props = detail::keyed(prefix, i, "fat");
    props["payload"] = detail::random_text(rng, length);
    g.create_node(Label::synthetic, std::move(props));
    ++s.nodes_created;
  }
  return s;
}

// `calls` merge_node invocations; each picks, with probability p_existing,
// a key from `existing_keys`, otherwise the fresh key "<prefix><i>".
inline SubgraphStats gen_merge_write(PropertyGraph& g, Rng& rng, std::size_t calls,
                                     const std::vector<std::string>& existing_keys, double p_existing = 0.5,
                                     const std::string& prefix = "m") {
  SubgraphStats s;
  std::bernoulli_distribution reuse(existing_keys.empty() ? 0.0 : p_existing);
  for (std::size_t i = 0; i < calls; ++i) {
    std::string key = reuse(rng) ? existing_keys[detail::uniform(rng, 0, existing_keys.size() - 1)]
                                 : prefix + std::to_string(i);
    auto [id, created] = g.merge_node(Label::synthetic, {{"key", std::move(key)}}, {{"kind", "merge"}});
    (void)id;
    if (created) {
      ++s.nodes_created;
    } else {
      ++s.merges_matched;
    }
  }
  return s;
}

enum class ReadKind { aggregate_read, random_access_read, long_path_read };

struct ReadSample {
  double elapsed_ms = 0.0;
  std::map<Label, std::size_t> label_counts;  // aggregate_read
  std::optional<Node> node;                   // random_access_read
  std::vector<NodeId> path;                   // long_path_read, start node first
};

inline constexpr std::size_t kMaxPathHops = 32;

inline ReadSample run_read(const PropertyGraph& g, Rng& rng, ReadKind kind) {
  const auto start = std::chrono::steady_clock::now();
  ReadSample sample;
  g.read([&](const GraphData& d) {
    if (kind == ReadKind::aggregate_read) {
      for (auto l : kAllLabels) sample.label_counts[l] = d.nodes_with_label(l).size();
      return;
    }
    if (d.node_count == 0) throw Error(Errc::empty_graph, "no nodes to read");
    // Uniform over the id space, skipping deleted slots.
    NodeId id = detail::uniform(rng, 0, d.nodes.size() - 1);
    while (!d.has_node(id)) id = (id + 1) % d.nodes.size();
    if (kind == ReadKind::random_access_read) {
      sample.node = *d.nodes[id];
      return;
    }
    std::set<NodeId> seen{id};
    sample.path.push_back(id);
    std::vector<NodeId> next;
    for (std::size_t hop = 0; hop < kMaxPathHops; ++hop) {
      next.clear();
      for (EdgeId e : d.out[id]) {
        if (!seen.contains(d.edges[e]->dst)) next.push_back(d.edges[e]->dst);
      }
      for (EdgeId e : d.in[id]) {
        if (!seen.contains(d.edges[e]->src)) next.push_back(d.edges[e]->src);
      }
      if (next.empty()) break;
      id = next[detail::uniform(rng, 0, next.size() - 1)];
      seen.insert(id);
      sample.path.push_back(id);
    }
  });
  sample.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return sample;
}

// ---------------------------------------------------------------------------
// Load driver

struct MixEntry {
  Pattern pattern;
  double weight;
};

// Pattern weights proportional to the reference run counts of the original
// scaling experiment (n = 1000, concurrency = 10, 10,030 operations).
inline std::vector<MixEntry> reference_mix() {
  return {{Pattern::fat_node_append, 1050}, {Pattern::nary_tree, 1003},      {Pattern::merge_write, 985},
          {Pattern::random_linkage, 1010},  {Pattern::hub_spoke, 481},       {Pattern::raw_write, 2933},
          {Pattern::index_heavy, 1002},     {Pattern::aggregate_read, 552},  {Pattern::random_access_read, 952},
          {Pattern::long_path_read, 62}};
}

struct PatternSizes {
  std::size_t hub_leaves_min = 10;
  std::size_t hub_leaves_max = 100;
  std::size_t tree_branching = 2;
  std::size_t tree_depth_min = 3;
  std::size_t tree_depth_max = 7;
  std::size_t raw_nodes = 25;
  std::size_t raw_edges = 10;
  std::size_t linkage_edges = 8;
  std::size_t index_nodes = 10;
  std::size_t index_props = 10;
  std::size_t fat_length = 4096;
  std::size_t merge_calls = 10;
  double merge_p_existing = 0.5;
  std::size_t anchor_nodes = 1000;
  std::size_t merge_pool = 500;
};

struct WorkloadSpec {
  std::size_t n = 1000;
  std::size_t concurrency = 10;
  std::uint64_t seed = 42;
  std::vector<MixEntry> mix = reference_mix();
  PatternSizes sizes;

  void validate() const {
    if (n < 1) throw Error(Errc::schema, "n must be >= 1");
    if (concurrency < 1) throw Error(Errc::schema, "concurrency must be >= 1");
    if (mix.empty()) throw Error(Errc::schema, "mix must name at least one pattern");
    std::set<Pattern> seen;
    for (const auto& m : mix) {
      if (!(m.weight > 0.0)) throw Error(Errc::schema, "weights must be > 0");
      if (!seen.insert(m.pattern).second) throw Error(Errc::schema, "pattern listed twice in mix");
    }
    if (sizes.hub_leaves_min > sizes.hub_leaves_max || sizes.tree_depth_min > sizes.tree_depth_max ||
        sizes.tree_depth_min < 1 || sizes.tree_branching < 1) {
      throw Error(Errc::schema, "invalid pattern sizes");
    }
  }
};

// Planned executions per pattern: the median write weight maps to n runs and
// every other pattern scales proportionally (at least one run each).
inline std::map<Pattern, std::size_t> planned_runs(const WorkloadSpec& spec) {
  std::vector<double> ref;
  for (const auto& m : spec.mix) {
    if (is_write(m.pattern)) ref.push_back(m.weight);
  }
  if (ref.empty()) {
    for (const auto& m : spec.mix) ref.push_back(m.weight);
  }
  std::sort(ref.begin(), ref.end());
  const double median = ref.size() % 2 ? ref[ref.size() / 2] : 0.5 * (ref[ref.size() / 2 - 1] + ref[ref.size() / 2]);
  std::map<Pattern, std::size_t> out;
  for (const auto& m : spec.mix) {
    const double runs = std::round(static_cast<double>(spec.n) * m.weight / median);
    out[m.pattern] = std::max<std::size_t>(1, static_cast<std::size_t>(runs));
  }
  return out;
}

struct PatternStats {
  std::size_t runs = 0;
  std::size_t failures = 0;
  double avg_ms = 0.0;
  double min_ms = 0.0;
  double max_ms = 0.0;
};

struct BenchmarkReport {
  std::map<Pattern, PatternStats> patterns;  // only patterns in the mix
  std::size_t total_runs = 0;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  double wall_ms = 0.0;
};

inline std::set<std::string> workload_indexed_keys(const PatternSizes& sizes) {
  std::set<std::string> keys{"key"};
  for (std::size_t i = 0; i < sizes.index_props; ++i) keys.insert(index_key(i));
  return keys;
}

namespace detail {

inline Rng op_rng(std::uint64_t seed, std::uint64_t op) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(op), static_cast<std::uint32_t>(op >> 32)};
  return Rng(seq);
}

}  // namespace detail

// Runs the workload against `store`. A single-threaded setup creates the
// anchor nodes (random-linkage endpoints) and the pre-existing merge keys;
// after that every operation derives its content from (seed, op index)
// only, so the resulting logical graph does not depend on thread
// interleaving.
inline BenchmarkReport run_benchmark(const WorkloadSpec& spec, PropertyGraph& store) {
  spec.validate();
  const auto& sz = spec.sizes;
  for (const auto& k : workload_indexed_keys(sz)) store.declare_index(k);

  std::vector<NodeId> anchors;
  anchors.reserve(sz.anchor_nodes);
  for (std::size_t i = 0; i < sz.anchor_nodes; ++i) {
    anchors.push_back(store.create_node(Label::synthetic, detail::keyed("a", i, "anchor")));
  }
  std::vector<std::string> merge_keys;
  for (std::size_t i = 0; i < sz.merge_pool; ++i) {
    merge_keys.push_back("mp" + std::to_string(i));
    store.create_node(Label::synthetic, {{"key", merge_keys.back()}, {"kind", "merge"}});
  }

  std::vector<Pattern> schedule;
  for (const auto& [p, runs] : planned_runs(spec)) schedule.insert(schedule.end(), runs, p);
  {
    Rng shuffle_rng = detail::op_rng(spec.seed, ~std::uint64_t{0});
    std::shuffle(schedule.begin(), schedule.end(), shuffle_rng);
  }

  auto execute = [&](std::size_t op, Pattern p) {
    Rng rng = detail::op_rng(spec.seed, op);
    const std::string prefix = "o" + std::to_string(op) + ".";
    switch (p) {
      case Pattern::fat_node_append: gen_fat_node(store, rng, 1, sz.fat_length, prefix); break;
      case Pattern::nary_tree:
        gen_nary_tree(store, rng, sz.tree_branching, detail::uniform(rng, sz.tree_depth_min, sz.tree_depth_max), prefix);
        break;
      case Pattern::merge_write: gen_merge_write(store, rng, sz.merge_calls, merge_keys, sz.merge_p_existing, prefix); break;
      case Pattern::random_linkage: gen_random_linkage(store, rng, sz.linkage_edges, anchors); break;
      case Pattern::hub_spoke:
        gen_hub_spoke(store, rng, detail::uniform(rng, sz.hub_leaves_min, sz.hub_leaves_max), prefix);
        break;
      case Pattern::raw_write: gen_raw_write(store, rng, sz.raw_nodes, sz.raw_edges, prefix); break;
      case Pattern::index_heavy: gen_index_heavy(store, rng, sz.index_nodes, sz.index_props, prefix); break;
      case Pattern::aggregate_read: run_read(store, rng, ReadKind::aggregate_read); break;
      case Pattern::random_access_read: run_read(store, rng, ReadKind::random_access_read); break;
      case Pattern::long_path_read: run_read(store, rng, ReadKind::long_path_read); break;
    }
  };

  struct Sample {
    Pattern pattern;
    double ms;
    bool ok;
  };
  std::vector<std::vector<Sample>> per_stream(spec.concurrency);
  std::atomic<std::size_t> next{0};
  const auto wall_start = std::chrono::steady_clock::now();
  {
    std::vector<std::jthread> streams;
    for (std::size_t s = 0; s < spec.concurrency; ++s) {
      streams.emplace_back([&, s] {
        auto& out = per_stream[s];
        for (;;) {
          const std::size_t op = next.fetch_add(1);
          if (op >= schedule.size()) break;
          const auto t0 = std::chrono::steady_clock::now();
          bool ok = true;
          try {
            execute(op, schedule[op]);
          } catch (const Error&) {
            ok = false;
          }
          const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
          out.push_back({schedule[op], ms, ok});
        }
      });
    }
  }
  BenchmarkReport report;
  report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - wall_start).count();

  std::map<Pattern, double> sums;
  for (const auto& m : spec.mix) report.patterns[m.pattern] = {};
  for (const auto& stream : per_stream) {
    for (const auto& smp : stream) {
      auto& st = report.patterns[smp.pattern];
      if (!smp.ok) ++st.failures;
      if (st.runs == 0) {
        st.min_ms = st.max_ms = smp.ms;
      } else {
        st.min_ms = std::min(st.min_ms, smp.ms);
        st.max_ms = std::max(st.max_ms, smp.ms);
      }
      ++st.runs;
      sums[smp.pattern] += smp.ms;
      ++report.total_runs;
    }
  }
  for (auto& [p, st] : report.patterns) {
    if (st.runs == 0) continue;
    st.avg_ms = sums[p] / static_cast<double>(st.runs);
    // Guard the ordering invariant against summation rounding.
    st.avg_ms = std::clamp(st.avg_ms, st.min_ms, st.max_ms);
  }
  report.node_count = store.node_count();
  report.edge_count = store.edge_count();
  return report;
}

inline BenchmarkReport run_benchmark(const WorkloadSpec& spec) {
  PropertyGraph scratch;
  return run_benchmark(spec, scratch);
}

// Interleaving-independent description of the graph: nodes by label and
// props, edges by endpoint keys, type and props, all sorted.
inline std::vector<std::string> logical_fingerprint(const PropertyGraph& g) {
  return g.read([](const GraphData& d) {
    auto node_key = [&](NodeId id) {
      const auto& props = d.nodes[id]->props;
      auto it = props.find("key");
      return it == props.end() ? "#" + std::to_string(id) : it->second;
    };
    std::vector<std::string> out;
    out.reserve(d.node_count + d.edge_count);
    for (const auto& n : d.nodes) {
      if (n) out.push_back("N " + std::string(label_name(n->label)) + " " + json(n->props).dump());
    }
    for (const auto& e : d.edges) {
      if (e) out.push_back("E " + node_key(e->src) + " " + node_key(e->dst) + " " + e->rel_type + " " + json(e->props).dump());
    }
    std::sort(out.begin(), out.end());
    return out;
  });
}

inline std::string to_csv(const BenchmarkReport& r) {
  std::string out = "pattern,runs,avg_ms,min_ms,max_ms\n";
  double sum = 0.0, lo = 0.0, hi = 0.0;
  bool first = true;
  for (const auto& [p, st] : r.patterns) {
    out += std::string(pattern_name(p)) + ',' + std::to_string(st.runs) + ',' + format_double(st.avg_ms) + ',' +
           format_double(st.min_ms) + ',' + format_double(st.max_ms) + '\n';
    if (st.runs == 0) continue;
    sum += st.avg_ms * static_cast<double>(st.runs);
    lo = first ? st.min_ms : std::min(lo, st.min_ms);
    hi = first ? st.max_ms : std::max(hi, st.max_ms);
    first = false;
  }
  const double avg = r.total_runs ? sum / static_cast<double>(r.total_runs) : 0.0;
  out += "total," + std::to_string(r.total_runs) + ',' + format_double(avg) + ',' + format_double(lo) + ',' +
         format_double(hi) + '\n';
  return out;
}

inline json to_json(const BenchmarkReport& r) {
  json patterns = json::array();
  for (const auto& [p, st] : r.patterns) {
    patterns.push_back({{"pattern", pattern_name(p)},
                        {"runs", st.runs},
                        {"failures", st.failures},
                        {"avg_ms", st.avg_ms},
                        {"min_ms", st.min_ms},
                        {"max_ms", st.max_ms}});
  }
  return {{"patterns", std::move(patterns)},
          {"total_runs", r.total_runs},
          {"node_count", r.node_count},
          {"edge_count", r.edge_count},
          {"wall_ms", r.wall_ms}};
}

inline WorkloadSpec workload_spec_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::schema, "workload spec must be an object");
  WorkloadSpec spec;
  try {
    if (j.contains("n")) spec.n = j.at("n").get<std::size_t>();
    if (j.contains("concurrency")) spec.concurrency = j.at("concurrency").get<std::size_t>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("mix")) {
      spec.mix.clear();
      for (const auto& m : j.at("mix")) {
        auto p = parse_pattern(m.at("pattern").get<std::string>());
        if (!p) throw Error(Errc::schema, "unknown pattern \"" + m.at("pattern").get<std::string>() + "\"");
        spec.mix.push_back({*p, m.value("weight", 1.0)});
      }
    }
    if (j.contains("sizes")) {
      const json& s = j.at("sizes");
      auto& z = spec.sizes;
      auto get = [&](const char* k, std::size_t& field) {
        if (s.contains(k)) field = s.at(k).get<std::size_t>();
      };
      get("hub_leaves_min", z.hub_leaves_min);
      get("hub_leaves_max", z.hub_leaves_max);
      get("tree_branching", z.tree_branching);
      get("tree_depth_min", z.tree_depth_min);
      get("tree_depth_max", z.tree_depth_max);
      get("raw_nodes", z.raw_nodes);
      get("raw_edges", z.raw_edges);
      get("linkage_edges", z.linkage_edges);
      get("index_nodes", z.index_nodes);
      get("index_props", z.index_props);
      get("fat_length", z.fat_length);
      get("merge_calls", z.merge_calls);
      get("anchor_nodes", z.anchor_nodes);
      get("merge_pool", z.merge_pool);
      if (s.contains("merge_p_existing")) z.merge_p_existing = s.at("merge_p_existing").get<double>();
    }
  } catch (const json::exception& e) {
    throw Error(Errc::schema, std::string("workload spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

inline json to_json(const WorkloadSpec& spec) {
  json mix = json::array();
  for (const auto& m : spec.mix) mix.push_back({{"pattern", pattern_name(m.pattern)}, {"weight", m.weight}});
  return {{"n", spec.n}, {"concurrency", spec.concurrency}, {"seed", spec.seed}, {"mix", std::move(mix)}};
}

}  // namespace graphled
