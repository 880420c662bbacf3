#pragma once

#include <set>
#include <string>
#include <vector>

#include "graphled/disambiguation.hpp"
#include "graphled/graph.hpp"
#include "graphled/ingest.hpp"

namespace graphled {

// Relationship type of databook -> document edges.
inline constexpr std::string_view kContains = "contains";

inline std::set<std::string> default_indexed_keys() { return {"doc_id", "databook_id", "value"}; }

namespace detail {

inline std::string join_doc_types(const std::vector<DocType>& types) {
  std::string out;
  for (auto t : types) {
    if (!out.empty()) out += ',';
    out += doc_type_name(t);
  }
  return out;
}

}  // namespace detail

inline std::vector<DocType> split_doc_types(std::string_view joined) {
  std::vector<DocType> out;
  while (!joined.empty()) {
    auto comma = joined.find(',');
    auto part = joined.substr(0, comma);
    if (!part.empty()) out.push_back(parse_doc_type(part));
    if (comma == std::string_view::npos) break;
    joined.remove_prefix(comma + 1);
  }
  return out;
}

// Documents become `document` nodes (input order), each canonical topic value
// one `topic` node per key, every mention a document -> topic edge typed by
// its key, and every databook a `databook` node with `contains` edges.
inline PropertyGraph build_graph(const DocumentSet& ds, const DisambiguationReport& report,
                                 const TopicKeys& topics = {},
                                 std::set<std::string> indexed_keys = default_indexed_keys()) {
  PropertyGraph g(std::move(indexed_keys));
  std::map<std::string, NodeId> doc_node;
  for (const auto& d : ds.documents) {
    doc_node[d.doc_id] = g.create_node(
        Label::document,
        {{"doc_id", d.doc_id}, {"doc_type", std::string(doc_type_name(d.doc_type))}, {"source_file", d.source_file}});
  }
  std::map<std::pair<std::string, std::string>, NodeId> topic_node;
  for (const auto& m : extract_entities(ds, topics)) {
    const std::string* canon = report.canonical(m.key, m.raw_value);
    if (!canon) {
      throw Error(Errc::reference, "no canonical value for " + m.key + "=\"" + m.raw_value + "\" in " + m.doc_id);
    }
    auto [it, inserted] = topic_node.try_emplace({m.key, *canon}, 0);
    if (inserted) it->second = g.merge_node(Label::topic, {{"key", m.key}, {"value", *canon}}).first;
    g.create_edge(doc_node.at(m.doc_id), it->second, m.key, {{"raw", m.raw_value}});
  }
  for (const auto& b : ds.databooks) {
    const NodeId book = g.create_node(
        Label::databook,
        {{"databook_id", b.databook_id}, {"required_doc_types", detail::join_doc_types(b.required_doc_types)}});
    for (const auto& id : b.document_ids) {
      auto it = doc_node.find(id);
      if (it == doc_node.end()) throw Error(Errc::reference, "databook \"" + b.databook_id + "\" references unknown doc_id \"" + id + "\"");
      g.create_edge(book, it->second, std::string(kContains));
    }
  }
  return g;
}

struct PipelineResult {
  std::size_t mentions = 0;
  DisambiguationReport report;
  PropertyGraph graph;
};

// extract -> disambiguate -> build.
inline PipelineResult run_pipeline(const DocumentSet& ds, const FilterConfig& cfg = {}, const TopicKeys& topics = {},
                                   const DisambiguateOptions& opts = {}) {
  auto mentions = extract_entities(ds, topics);
  PipelineResult r;
  r.mentions = mentions.size();
  r.report = disambiguate(std::move(mentions), cfg, opts);
  r.graph = build_graph(ds, r.report, topics);
  return r;
}

inline std::optional<NodeId> find_databook(const PropertyGraph& g, const std::string& databook_id) {
  auto found = g.find_nodes(Label::databook, {{"databook_id", databook_id}});
  if (found.empty()) return std::nullopt;
  return found.front();
}

inline std::optional<NodeId> find_document(const PropertyGraph& g, const std::string& doc_id) {
  auto found = g.find_nodes(Label::document, {{"doc_id", doc_id}});
  if (found.empty()) return std::nullopt;
  return found.front();
}

struct DeleteSummary {
  std::size_t nodes_removed = 0;
  std::size_t edges_removed = 0;
  std::vector<std::string> documents_removed;
};

// Removes a databook node, the documents no other databook contains, and
// topics left without any document.
inline DeleteSummary delete_databook(PropertyGraph& g, const std::string& databook_id) {
  auto book = find_databook(g, databook_id);
  if (!book) throw Error(Errc::unknown_databook, databook_id);
  std::vector<NodeId> docs;
  std::set<NodeId> topics;
  g.read([&](const GraphData& d) {
    for (EdgeId e : d.out[*book]) {
      const Edge& edge = *d.edges[e];
      if (edge.rel_type != kContains) continue;
      const NodeId doc = edge.dst;
      bool shared = false;
      for (EdgeId in : d.in[doc]) {
        const Edge& other = *d.edges[in];
        if (other.src != *book && other.rel_type == kContains && d.node(other.src).label == Label::databook) shared = true;
      }
      if (shared) continue;
      docs.push_back(doc);
      for (EdgeId out : d.out[doc]) {
        if (d.node(d.edges[out]->dst).label == Label::topic) topics.insert(d.edges[out]->dst);
      }
    }
  });
  DeleteSummary s;
  s.edges_removed += g.delete_node(*book);
  ++s.nodes_removed;
  for (NodeId doc : docs) {
    s.documents_removed.push_back(g.node(doc)->props.at("doc_id"));
    s.edges_removed += g.delete_node(doc);
    ++s.nodes_removed;
  }
  for (NodeId t : topics) {
    if (g.in_edges(t).empty() && g.out_edges(t).empty()) {
      g.delete_node(t);
      ++s.nodes_removed;
    }
  }
  return s;
}

}  // namespace graphled
