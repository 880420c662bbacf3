#pragma once

// Embedded property-graph store: labelled nodes, typed directed edges,
// string properties, adjacency / label / property indices, JSON-lines
// persistence. Many readers or one writer at a time.

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "graphled/error.hpp"

namespace graphled {

using json = nlohmann::json;
using NodeId = std::uint64_t;
using EdgeId = std::uint64_t;
using Props = std::map<std::string, std::string>;

enum class Label : std::uint8_t { document, topic, databook, synthetic };

inline constexpr std::array<Label, 4> kAllLabels{Label::document, Label::topic, Label::databook, Label::synthetic};

inline constexpr std::string_view label_name(Label l) noexcept {
  switch (l) {
    case Label::document: return "document";
    case Label::topic: return "topic";
    case Label::databook: return "databook";
    case Label::synthetic: return "synthetic";
  }
  return "synthetic";
}

inline std::optional<Label> parse_label(std::string_view name) noexcept {
  for (auto l : kAllLabels) {
    if (label_name(l) == name) return l;
  }
  return std::nullopt;
}

struct Node {
  NodeId id = 0;
  Label label = Label::synthetic;
  Props props;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  EdgeId id = 0;
  NodeId src = 0;
  NodeId dst = 0;
  std::string rel_type;
  Props props;

  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class FilterTarget { any, src, edge, dst };

struct PropFilter {
  std::string key;
  std::string value;
  FilterTarget on = FilterTarget::any;
};

struct TraversalQuery {
  std::optional<Label> src_label;
  std::optional<std::string> rel_type;
  std::optional<Label> dst_label;
  std::vector<PropFilter> prop_filters;
  std::size_t limit = 1000;
};

struct Triple {
  Node src;
  Edge edge;
  Node dst;
};

struct AuditReport {
  std::size_t discrepancies = 0;
  std::vector<std::string> messages;  // first few problems, for diagnostics

  bool ok() const noexcept { return discrepancies == 0; }
};

// Raw store contents. Read-only algorithms receive a const reference through
// PropertyGraph::read() while the shared lock is held.
struct GraphData {
  std::vector<std::optional<Node>> nodes;  // indexed by NodeId
  std::vector<std::optional<Edge>> edges;  // indexed by EdgeId
  std::vector<std::vector<EdgeId>> out;    // per node
  std::vector<std::vector<EdgeId>> in;     // per node
  std::array<std::set<NodeId>, kAllLabels.size()> by_label;
  std::set<std::string> indexed_keys;
  // indexed key -> value -> nodes
  std::unordered_map<std::string, std::unordered_map<std::string, std::set<NodeId>>> prop_index;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;

  bool has_node(NodeId id) const noexcept { return id < nodes.size() && nodes[id].has_value(); }
  bool has_edge(EdgeId id) const noexcept { return id < edges.size() && edges[id].has_value(); }

  const Node& node(NodeId id) const {
    if (!has_node(id)) throw Error(Errc::unknown_node, "node " + std::to_string(id));
    return *nodes[id];
  }
  const Edge& edge(EdgeId id) const {
    if (!has_edge(id)) throw Error(Errc::unknown_edge, "edge " + std::to_string(id));
    return *edges[id];
  }

  const std::set<NodeId>& nodes_with_label(Label l) const { return by_label[static_cast<std::size_t>(l)]; }

  std::size_t degree(NodeId id) const { return out[id].size() + in[id].size(); }

  // Nodes of the label whose props contain every (key, value) in match.
  std::vector<NodeId> match(Label label, const Props& match_props) const {
    std::vector<NodeId> found;
    const std::set<NodeId>* candidates = &nodes_with_label(label);
    for (const auto& [k, v] : match_props) {
      auto ki = prop_index.find(k);
      if (ki == prop_index.end()) continue;
      auto vi = ki->second.find(v);
      if (vi == ki->second.end()) return found;
      if (vi->second.size() < candidates->size()) candidates = &vi->second;
    }
    for (NodeId id : *candidates) {
      const Node& n = *nodes[id];
      if (n.label != label) continue;
      bool all = true;
      for (const auto& [k, v] : match_props) {
        auto it = n.props.find(k);
        if (it == n.props.end() || it->second != v) {
          all = false;
          break;
        }
      }
      if (all) found.push_back(id);
    }
    return found;
  }
};

namespace detail {

inline bool props_match(const Props& props, const PropFilter& f) {
  auto it = props.find(f.key);
  return it != props.end() && it->second == f.value;
}

inline bool triple_matches(const GraphData& d, const Edge& e, const TraversalQuery& q) {
  const Node& s = *d.nodes[e.src];
  const Node& t = *d.nodes[e.dst];
  if (q.src_label && s.label != *q.src_label) return false;
  if (q.dst_label && t.label != *q.dst_label) return false;
  if (q.rel_type && e.rel_type != *q.rel_type) return false;
  for (const auto& f : q.prop_filters) {
    bool ok = false;
    switch (f.on) {
      case FilterTarget::src: ok = props_match(s.props, f); break;
      case FilterTarget::edge: ok = props_match(e.props, f); break;
      case FilterTarget::dst: ok = props_match(t.props, f); break;
      case FilterTarget::any:
        ok = props_match(s.props, f) || props_match(e.props, f) || props_match(t.props, f);
        break;
    }
    if (!ok) return false;
  }
  return true;
}

inline void erase_one(std::vector<EdgeId>& v, EdgeId id) {
  auto it = std::find(v.begin(), v.end(), id);
  if (it != v.end()) v.erase(it);
}

}  // namespace detail

class PropertyGraph {
 public:
  explicit PropertyGraph(std::set<std::string> indexed_keys = {}) { data_.indexed_keys = std::move(indexed_keys); }

  PropertyGraph(const PropertyGraph& other) {
    std::shared_lock lock(other.mu_);
    data_ = other.data_;
  }
  PropertyGraph& operator=(const PropertyGraph& other) {
    if (this == &other) return *this;
    GraphData copy;
    {
      std::shared_lock lock(other.mu_);
      copy = other.data_;
    }
    std::unique_lock lock(mu_);
    data_ = std::move(copy);
    return *this;
  }
  PropertyGraph(PropertyGraph&& other) noexcept : data_(std::move(other.data_)) {}
  PropertyGraph& operator=(PropertyGraph&& other) noexcept {
    if (this != &other) {
      std::unique_lock lock(mu_);
      data_ = std::move(other.data_);
    }
    return *this;
  }

  // Runs f(const GraphData&) under the shared lock. f must not call back
  // into this graph.
  template <class F>
  decltype(auto) read(F&& f) const {
    std::shared_lock lock(mu_);
    return std::forward<F>(f)(static_cast<const GraphData&>(data_));
  }

  // Adds a key to the property index and indexes existing nodes.
  void declare_index(const std::string& key) {
    std::unique_lock lock(mu_);
    if (!data_.indexed_keys.insert(key).second) return;
    auto& idx = data_.prop_index[key];
    for (const auto& n : data_.nodes) {
      if (!n) continue;
      if (auto it = n->props.find(key); it != n->props.end()) idx[it->second].insert(n->id);
    }
  }

  NodeId create_node(Label label, Props props = {}) {
    std::unique_lock lock(mu_);
    return create_node_locked(label, std::move(props));
  }

  EdgeId create_edge(NodeId src, NodeId dst, std::string rel_type, Props props = {}) {
    std::unique_lock lock(mu_);
    return create_edge_locked(src, dst, std::move(rel_type), std::move(props));
  }

  // Deletes the node and every incident edge; returns the number of edges
  // removed with it.
  std::size_t delete_node(NodeId id) {
    std::unique_lock lock(mu_);
    if (!data_.has_node(id)) throw Error(Errc::unknown_node, "node " + std::to_string(id));
    std::set<EdgeId> incident(data_.out[id].begin(), data_.out[id].end());
    incident.insert(data_.in[id].begin(), data_.in[id].end());
    for (EdgeId e : incident) delete_edge_locked(e);
    Node& n = *data_.nodes[id];
    unindex(n);
    data_.by_label[static_cast<std::size_t>(n.label)].erase(id);
    data_.nodes[id].reset();
    data_.out[id].clear();
    data_.in[id].clear();
    --data_.node_count;
    return incident.size();
  }

  void delete_edge(EdgeId id) {
    std::unique_lock lock(mu_);
    delete_edge_locked(id);
  }

  // Returns the unique node with this label whose props contain match_props,
  // creating it (with match_props plus extra_props) when none exists.
  std::pair<NodeId, bool> merge_node(Label label, const Props& match_props, const Props& extra_props = {}) {
    if (match_props.empty()) throw Error(Errc::invalid_argument, "merge_node needs at least one match property");
    std::unique_lock lock(mu_);
    auto found = data_.match(label, match_props);
    if (found.size() > 1) {
      throw Error(Errc::ambiguous_merge, std::to_string(found.size()) + " nodes match the merge properties");
    }
    if (found.size() == 1) return {found.front(), false};
    Props props = match_props;
    for (const auto& [k, v] : extra_props) props.emplace(k, v);
    return {create_node_locked(label, std::move(props)), true};
  }

  void set_node_property(NodeId id, const std::string& key, std::string value) {
    std::unique_lock lock(mu_);
    if (!data_.has_node(id)) throw Error(Errc::unknown_node, "node " + std::to_string(id));
    Node& n = *data_.nodes[id];
    unindex(n);
    n.props[key] = std::move(value);
    index(n);
  }

  std::optional<Node> node(NodeId id) const {
    std::shared_lock lock(mu_);
    if (!data_.has_node(id)) return std::nullopt;
    return *data_.nodes[id];
  }

  std::optional<Edge> edge(EdgeId id) const {
    std::shared_lock lock(mu_);
    if (!data_.has_edge(id)) return std::nullopt;
    return *data_.edges[id];
  }

  bool has_node(NodeId id) const {
    std::shared_lock lock(mu_);
    return data_.has_node(id);
  }

  std::size_t node_count() const {
    std::shared_lock lock(mu_);
    return data_.node_count;
  }

  std::size_t edge_count() const {
    std::shared_lock lock(mu_);
    return data_.edge_count;
  }

  // One past the largest id ever allocated.
  NodeId node_id_bound() const {
    std::shared_lock lock(mu_);
    return data_.nodes.size();
  }

  std::map<Label, std::size_t> label_histogram() const {
    std::shared_lock lock(mu_);
    std::map<Label, std::size_t> h;
    for (auto l : kAllLabels) {
      if (auto n = data_.nodes_with_label(l).size()) h[l] = n;
    }
    return h;
  }

  std::vector<NodeId> nodes_with_label(Label l) const {
    std::shared_lock lock(mu_);
    const auto& s = data_.nodes_with_label(l);
    return {s.begin(), s.end()};
  }

  std::vector<NodeId> find_nodes(Label label, const Props& match_props) const {
    std::shared_lock lock(mu_);
    return data_.match(label, match_props);
  }

  std::vector<Edge> out_edges(NodeId id) const { return incident(id, true); }
  std::vector<Edge> in_edges(NodeId id) const { return incident(id, false); }

  // Edge triples satisfying every constraint, ordered by edge id.
  std::vector<Triple> traverse(const TraversalQuery& q) const {
    if (q.limit < 1) throw Error(Errc::invalid_argument, "traversal limit must be >= 1");
    std::shared_lock lock(mu_);
    std::vector<Triple> out;
    auto emit = [&](const Edge& e) {
      if (!detail::triple_matches(data_, e, q)) return false;
      out.push_back({*data_.nodes[e.src], e, *data_.nodes[e.dst]});
      return out.size() >= q.limit;
    };
    if (q.src_label && data_.nodes_with_label(*q.src_label).size() * 4 < data_.edge_count) {
      std::vector<EdgeId> candidates;
      for (NodeId n : data_.nodes_with_label(*q.src_label)) {
        candidates.insert(candidates.end(), data_.out[n].begin(), data_.out[n].end());
      }
      std::sort(candidates.begin(), candidates.end());
      for (EdgeId e : candidates) {
        if (emit(*data_.edges[e])) break;
      }
    } else {
      for (const auto& e : data_.edges) {
        if (e && emit(*e)) break;
      }
    }
    return out;
  }

  // Rebuilds every index from the node and edge lists and counts mismatches.
  AuditReport audit() const {
    std::shared_lock lock(mu_);
    AuditReport r;
    auto fail = [&r](std::string msg) {
      ++r.discrepancies;
      if (r.messages.size() < 20) r.messages.push_back(std::move(msg));
    };
    const auto& d = data_;
    if (d.out.size() != d.nodes.size() || d.in.size() != d.nodes.size()) {
      fail("adjacency arrays sized differently from node table");
      return r;
    }
    std::vector<std::vector<EdgeId>> out(d.nodes.size()), in(d.nodes.size());
    std::size_t edges = 0;
    for (EdgeId id = 0; id < d.edges.size(); ++id) {
      if (!d.edges[id]) continue;
      const Edge& e = *d.edges[id];
      ++edges;
      if (e.id != id) fail("edge " + std::to_string(id) + " stores id " + std::to_string(e.id));
      if (!d.has_node(e.src) || !d.has_node(e.dst)) {
        fail("edge " + std::to_string(id) + " has a dangling endpoint");
        continue;
      }
      out[e.src].push_back(id);
      in[e.dst].push_back(id);
    }
    if (edges != d.edge_count) fail("edge count mismatch");
    std::size_t nodes = 0;
    std::array<std::set<NodeId>, kAllLabels.size()> by_label;
    std::unordered_map<std::string, std::unordered_map<std::string, std::set<NodeId>>> prop_index;
    for (NodeId id = 0; id < d.nodes.size(); ++id) {
      auto a = d.out[id], b = out[id];
      std::sort(a.begin(), a.end());
      if (a != b) fail("out-adjacency of node " + std::to_string(id) + " inconsistent");
      a = d.in[id];
      b = in[id];
      std::sort(a.begin(), a.end());
      if (a != b) fail("in-adjacency of node " + std::to_string(id) + " inconsistent");
      if (!d.nodes[id]) continue;
      ++nodes;
      const Node& n = *d.nodes[id];
      if (n.id != id) fail("node " + std::to_string(id) + " stores id " + std::to_string(n.id));
      by_label[static_cast<std::size_t>(n.label)].insert(id);
      for (const auto& k : d.indexed_keys) {
        if (auto it = n.props.find(k); it != n.props.end()) prop_index[k][it->second].insert(id);
      }
    }
    if (nodes != d.node_count) fail("node count mismatch");
    if (by_label != d.by_label) fail("label index inconsistent");
    for (const auto& k : d.indexed_keys) {
      auto expected = prop_index[k];
      std::unordered_map<std::string, std::set<NodeId>> actual;
      if (auto it = d.prop_index.find(k); it != d.prop_index.end()) {
        for (const auto& [v, ids] : it->second) {
          if (!ids.empty()) actual[v] = ids;
        }
      }
      if (expected != actual) fail("property index on \"" + k + "\" inconsistent");
    }
    return r;
  }

  // JSON-lines persistence. Layout: a "GRAPHLED1" header line, one line per
  // node, one line per edge, then an end marker carrying the counts and the
  // indexed keys so truncation is always detected.
  std::size_t write(std::ostream& os) const {
    std::shared_lock lock(mu_);
    std::size_t bytes = 0;
    auto put = [&](const std::string& line) {
      os << line << '\n';
      bytes += line.size() + 1;
    };
    put("GRAPHLED1");
    for (const auto& n : data_.nodes) {
      if (n) put(json{{"n", n->id}, {"l", label_name(n->label)}, {"p", n->props}}.dump());
    }
    for (const auto& e : data_.edges) {
      if (e) put(json{{"e", e->id}, {"s", e->src}, {"d", e->dst}, {"t", e->rel_type}, {"p", e->props}}.dump());
    }
    put(json{{"end", true},
             {"nodes", data_.node_count},
             {"edges", data_.edge_count},
             {"next_node", data_.nodes.size()},
             {"next_edge", data_.edges.size()},
             {"indexed", data_.indexed_keys}}
            .dump());
    if (!os) throw Error(Errc::io, "write failed");
    return bytes;
  }

  static PropertyGraph read_from(std::istream& is) {
    auto bad = [](std::size_t line_no, const std::string& why) {
      return Error(Errc::format, "line " + std::to_string(line_no) + ": " + why);
    };
    std::string line;
    if (!std::getline(is, line) || line != "GRAPHLED1") throw Error(Errc::format, "bad magic or version");
    GraphData d;
    std::size_t line_no = 1;
    bool edges_started = false;
    bool ended = false;
    while (std::getline(is, line)) {
      ++line_no;
      if (ended) throw bad(line_no, "content after end marker");
      json j;
      try {
        j = json::parse(line);
      } catch (const json::parse_error&) {
        throw bad(line_no, "malformed record");
      }
      try {
        if (j.contains("n")) {
          if (edges_started) throw bad(line_no, "node after edges");
          Node n;
          n.id = j.at("n").get<NodeId>();
          auto l = parse_label(j.at("l").get<std::string>());
          if (!l) throw bad(line_no, "unknown label");
          n.label = *l;
          n.props = j.at("p").get<Props>();
          if (n.id < d.nodes.size() && d.nodes[n.id]) throw bad(line_no, "duplicate node id");
          if (n.id >= d.nodes.size()) {
            d.nodes.resize(n.id + 1);
            d.out.resize(n.id + 1);
            d.in.resize(n.id + 1);
          }
          d.by_label[static_cast<std::size_t>(n.label)].insert(n.id);
          d.nodes[n.id] = std::move(n);
          ++d.node_count;
        } else if (j.contains("e")) {
          edges_started = true;
          Edge e;
          e.id = j.at("e").get<EdgeId>();
          e.src = j.at("s").get<NodeId>();
          e.dst = j.at("d").get<NodeId>();
          e.rel_type = j.at("t").get<std::string>();
          e.props = j.at("p").get<Props>();
          if (!d.has_node(e.src) || !d.has_node(e.dst)) throw bad(line_no, "edge endpoint missing");
          if (e.id < d.edges.size() && d.edges[e.id]) throw bad(line_no, "duplicate edge id");
          if (e.id >= d.edges.size()) d.edges.resize(e.id + 1);
          d.out[e.src].push_back(e.id);
          d.in[e.dst].push_back(e.id);
          d.edges[e.id] = std::move(e);
          ++d.edge_count;
        } else if (j.contains("end")) {
          if (j.at("nodes").get<std::size_t>() != d.node_count || j.at("edges").get<std::size_t>() != d.edge_count) {
            throw bad(line_no, "record count mismatch");
          }
          const auto next_node = j.at("next_node").get<std::size_t>();
          const auto next_edge = j.at("next_edge").get<std::size_t>();
          if (next_node < d.nodes.size() || next_edge < d.edges.size()) throw bad(line_no, "id bound too small");
          d.nodes.resize(next_node);
          d.out.resize(next_node);
          d.in.resize(next_node);
          d.edges.resize(next_edge);
          d.indexed_keys = j.at("indexed").get<std::set<std::string>>();
          ended = true;
        } else {
          throw bad(line_no, "unknown record");
        }
      } catch (const json::exception&) {
        throw bad(line_no, "record has missing or mistyped fields");
      }
    }
    if (!ended) throw Error(Errc::format, "truncated file: end marker missing");
    for (auto& adj : d.out) std::sort(adj.begin(), adj.end());
    for (auto& adj : d.in) std::sort(adj.begin(), adj.end());
    for (const auto& k : d.indexed_keys) {
      auto& idx = d.prop_index[k];
      for (const auto& n : d.nodes) {
        if (!n) continue;
        if (auto it = n->props.find(k); it != n->props.end()) idx[it->second].insert(n->id);
      }
    }
    PropertyGraph g;
    g.data_ = std::move(d);
    return g;
  }

 private:
  NodeId create_node_locked(Label label, Props props) {
    const NodeId id = data_.nodes.size();
    data_.nodes.push_back(Node{id, label, std::move(props)});
    data_.out.emplace_back();
    data_.in.emplace_back();
    data_.by_label[static_cast<std::size_t>(label)].insert(id);
    index(*data_.nodes.back());
    ++data_.node_count;
    return id;
  }

  EdgeId create_edge_locked(NodeId src, NodeId dst, std::string rel_type, Props props) {
    if (!data_.has_node(src)) throw Error(Errc::unknown_node, "edge source " + std::to_string(src));
    if (!data_.has_node(dst)) throw Error(Errc::unknown_node, "edge target " + std::to_string(dst));
    const EdgeId id = data_.edges.size();
    data_.edges.push_back(Edge{id, src, dst, std::move(rel_type), std::move(props)});
    data_.out[src].push_back(id);
    data_.in[dst].push_back(id);
    ++data_.edge_count;
    return id;
  }

  void delete_edge_locked(EdgeId id) {
    if (!data_.has_edge(id)) throw Error(Errc::unknown_edge, "edge " + std::to_string(id));
    const Edge& e = *data_.edges[id];
    detail::erase_one(data_.out[e.src], id);
    detail::erase_one(data_.in[e.dst], id);
    data_.edges[id].reset();
    --data_.edge_count;
  }

  void index(const Node& n) {
    for (const auto& k : data_.indexed_keys) {
      if (auto it = n.props.find(k); it != n.props.end()) data_.prop_index[k][it->second].insert(n.id);
    }
  }

  void unindex(const Node& n) {
    for (const auto& k : data_.indexed_keys) {
      auto it = n.props.find(k);
      if (it == n.props.end()) continue;
      auto& values = data_.prop_index[k];
      auto vi = values.find(it->second);
      if (vi == values.end()) continue;
      vi->second.erase(n.id);
      if (vi->second.empty()) values.erase(vi);
    }
  }

  std::vector<Edge> incident(NodeId id, bool outgoing) const {
    std::shared_lock lock(mu_);
    if (!data_.has_node(id)) throw Error(Errc::unknown_node, "node " + std::to_string(id));
    std::vector<Edge> out;
    for (EdgeId e : (outgoing ? data_.out[id] : data_.in[id])) out.push_back(*data_.edges[e]);
    return out;
  }

  mutable std::shared_mutex mu_;
  GraphData data_;
};

inline std::size_t save(const PropertyGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot open " + path + " for writing");
  const auto bytes = g.write(out);
  out.flush();
  if (!out) throw Error(Errc::io, "write to " + path + " failed");
  return bytes;
}

inline PropertyGraph load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path);
  return PropertyGraph::read_from(in);
}

// Logical equality: same ids, labels, props, edges and indexed keys.
inline bool same_graph(const PropertyGraph& a, const PropertyGraph& b) {
  return a.read([&](const GraphData& x) {
    return b.read([&](const GraphData& y) {
      if (x.node_count != y.node_count || x.edge_count != y.edge_count) return false;
      if (x.indexed_keys != y.indexed_keys) return false;
      auto live_nodes = [](const GraphData& d) {
        std::vector<const Node*> v;
        for (const auto& n : d.nodes) {
          if (n) v.push_back(&*n);
        }
        return v;
      };
      auto live_edges = [](const GraphData& d) {
        std::vector<const Edge*> v;
        for (const auto& e : d.edges) {
          if (e) v.push_back(&*e);
        }
        return v;
      };
      auto xn = live_nodes(x), yn = live_nodes(y);
      if (!std::equal(xn.begin(), xn.end(), yn.begin(), yn.end(), [](auto* p, auto* q) { return *p == *q; })) {
        return false;
      }
      auto xe = live_edges(x), ye = live_edges(y);
      return std::equal(xe.begin(), xe.end(), ye.begin(), ye.end(), [](auto* p, auto* q) { return *p == *q; });
    });
  });
}

// ---------------------------------------------------------------------------
// JSON forms used by the service and CLI.

inline json to_json(const Node& n) { return {{"id", n.id}, {"label", label_name(n.label)}, {"props", n.props}}; }

inline json to_json(const Edge& e) {
  return {{"id", e.id}, {"src", e.src}, {"dst", e.dst}, {"rel_type", e.rel_type}, {"props", e.props}};
}

inline json to_json(const Triple& t) { return {{"src", to_json(t.src)}, {"edge", to_json(t.edge)}, {"dst", to_json(t.dst)}}; }

inline TraversalQuery query_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::schema, "traversal query must be an object");
  TraversalQuery q;
  auto label_field = [&](const char* field) -> std::optional<Label> {
    auto it = j.find(field);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw Error(Errc::schema, std::string("/") + field + " must be a string");
    auto l = parse_label(it->get<std::string>());
    if (!l) throw Error(Errc::schema, std::string("/") + field + " is not a known label");
    return l;
  };
  q.src_label = label_field("src_label");
  q.dst_label = label_field("dst_label");
  if (auto it = j.find("rel_type"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw Error(Errc::schema, "/rel_type must be a string");
    q.rel_type = it->get<std::string>();
  }
  if (auto it = j.find("prop_filters"); it != j.end()) {
    if (!it->is_array()) throw Error(Errc::schema, "/prop_filters must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& f = (*it)[i];
      const std::string path = "/prop_filters/" + std::to_string(i);
      if (!f.is_object() || !f.contains("key") || !f.contains("value") || !f["key"].is_string() ||
          !f["value"].is_string()) {
        throw Error(Errc::schema, path + " needs string key and value");
      }
      PropFilter pf{f["key"].get<std::string>(), f["value"].get<std::string>(), FilterTarget::any};
      if (auto on = f.find("on"); on != f.end()) {
        const std::string where = on->is_string() ? on->get<std::string>() : "";
        if (where == "src") pf.on = FilterTarget::src;
        else if (where == "edge") pf.on = FilterTarget::edge;
        else if (where == "dst") pf.on = FilterTarget::dst;
        else if (where == "any") pf.on = FilterTarget::any;
        else throw Error(Errc::schema, path + "/on must be src, edge, dst or any");
      }
      q.prop_filters.push_back(std::move(pf));
    }
  }
  if (auto it = j.find("limit"); it != j.end()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 1) throw Error(Errc::schema, "/limit must be an integer >= 1");
    q.limit = it->get<std::size_t>();
  }
  return q;
}

}  // namespace graphled
