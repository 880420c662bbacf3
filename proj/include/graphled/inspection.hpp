#pragma once

// Inspections over databook graphs: completeness, conformance to field
// rules, traceability, and OCR-vs-ground-truth accuracy classification.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <deque>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "graphled/disambiguation.hpp"
#include "graphled/error.hpp"
#include "graphled/format.hpp"
#include "graphled/graph.hpp"
#include "graphled/graph_builder.hpp"
#include "graphled/ingest.hpp"
#include "graphled/similarity.hpp"
#include "graphled/union_find.hpp"

namespace graphled {

// ---------------------------------------------------------------------------
// Completeness

struct CompletenessReport {
  std::string databook_id;
  bool is_complete = false;
  std::vector<DocType> missing_doc_types;
  std::vector<std::string> isolated_documents;
  bool connected = false;
  std::size_t document_count = 0;
};

namespace detail {

inline const std::string& prop_or_empty(const Node& n, const std::string& key) {
  static const std::string empty;
  auto it = n.props.find(key);
  return it == n.props.end() ? empty : it->second;
}

inline std::vector<NodeId> databook_documents(const GraphData& d, NodeId book) {
  std::vector<NodeId> docs;
  for (EdgeId e : d.out[book]) {
    const Edge& edge = *d.edges[e];
    if (edge.rel_type == kContains && d.node(edge.dst).label == Label::document) docs.push_back(edge.dst);
  }
  std::sort(docs.begin(), docs.end());
  docs.erase(std::unique(docs.begin(), docs.end()), docs.end());
  return docs;
}

inline std::vector<NodeId> linked_topics(const GraphData& d, NodeId doc) {
  std::vector<NodeId> topics;
  for (EdgeId e : d.out[doc]) {
    const NodeId t = d.edges[e]->dst;
    if (d.node(t).label == Label::topic) topics.push_back(t);
  }
  return topics;
}

inline CompletenessReport completeness_of(const GraphData& d, NodeId book,
                                          const std::optional<std::vector<DocType>>& required_override) {
  const Node& book_node = d.node(book);
  CompletenessReport r;
  r.databook_id = prop_or_empty(book_node, "databook_id");
  const std::vector<DocType> required =
      required_override ? *required_override : split_doc_types(prop_or_empty(book_node, "required_doc_types"));

  const auto docs = databook_documents(d, book);
  r.document_count = docs.size();
  std::set<DocType> present;
  for (NodeId doc : docs) present.insert(parse_doc_type(prop_or_empty(d.node(doc), "doc_type")));
  std::set<DocType> reported;
  for (DocType t : required) {
    if (!present.contains(t) && reported.insert(t).second) r.missing_doc_types.push_back(t);
  }

  // Components of the subgraph induced by the databook documents and the
  // topics they reference.
  std::map<NodeId, std::size_t> slot;
  for (NodeId doc : docs) slot.emplace(doc, slot.size());
  std::map<NodeId, std::set<NodeId>> topic_docs;
  for (NodeId doc : docs) {
    for (NodeId t : linked_topics(d, doc)) topic_docs[t].insert(doc);
  }
  for (const auto& [t, ds] : topic_docs) slot.emplace(t, slot.size());
  UnionFind uf(slot.size());
  for (const auto& [t, ds] : topic_docs) {
    for (NodeId doc : ds) uf.unite(slot.at(t), slot.at(doc));
  }
  r.connected = true;
  for (NodeId doc : docs) {
    if (!uf.connected(slot.at(docs.front()), slot.at(doc))) r.connected = false;
  }
  if (docs.size() >= 2) {
    for (NodeId doc : docs) {
      bool shares = false;
      for (NodeId t : linked_topics(d, doc)) {
        if (topic_docs.at(t).size() > 1) shares = true;
      }
      if (!shares) r.isolated_documents.push_back(prop_or_empty(d.node(doc), "doc_id"));
    }
  }
  r.is_complete = r.missing_doc_types.empty() && r.connected;
  return r;
}

inline std::optional<NodeId> find_by(const GraphData& d, Label label, const std::string& key, const std::string& value) {
  auto found = d.match(label, {{key, value}});
  if (found.empty()) return std::nullopt;
  return found.front();
}

}  // namespace detail

// Required document types default to the list stored on the databook node.
inline CompletenessReport check_completeness(const PropertyGraph& g, const std::string& databook_id,
                                             const std::optional<std::vector<DocType>>& required = std::nullopt) {
  return g.read([&](const GraphData& d) {
    auto book = detail::find_by(d, Label::databook, "databook_id", databook_id);
    if (!book) throw Error(Errc::unknown_databook, databook_id);
    return detail::completeness_of(d, *book, required);
  });
}

inline json to_json(const CompletenessReport& r) {
  json missing = json::array();
  for (auto t : r.missing_doc_types) missing.push_back(doc_type_name(t));
  return {{"databook_id", r.databook_id},
          {"is_complete", r.is_complete},
          {"missing_doc_types", std::move(missing)},
          {"isolated_documents", r.isolated_documents},
          {"connected", r.connected},
          {"document_count", r.document_count}};
}

// ---------------------------------------------------------------------------
// Conformance

struct NumericRange {
  double min = 0.0;
  double max = 0.0;
  std::string units;
};
struct RegexMatch {
  std::string pattern;
};
struct ValueInSet {
  std::vector<std::string> values;
};
struct RequiredPresent {};

using RuleCheck = std::variant<NumericRange, RegexMatch, ValueInSet, RequiredPresent>;

struct ConformanceRule {
  std::string rule_id;
  DocType doc_type = DocType::generic;
  std::string field_key;
  RuleCheck check;
  std::string standard_ref;
};

enum class Outcome { pass, fail, inapplicable };

inline constexpr std::string_view outcome_name(Outcome o) noexcept {
  switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::fail: return "fail";
    case Outcome::inapplicable: return "inapplicable";
  }
  return "fail";
}

struct ConformanceResult {
  std::string doc_id;
  std::string rule_id;
  Outcome outcome = Outcome::fail;
  std::string detail;
};

// Decimal number with either '.' or ',' as separator, optionally followed by
// the unit text. OCR letter/digit confusions ("25O") are rejected.
inline std::optional<double> parse_decimal(std::string_view raw, std::string_view units = {}) {
  std::string_view v = detail::trim(raw);
  if (!units.empty() && v.size() >= units.size()) {
    auto tail = v.substr(v.size() - units.size());
    bool same = std::equal(tail.begin(), tail.end(), units.begin(), units.end(), [](char a, char b) {
      return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
    });
    if (same) v = detail::trim(v.substr(0, v.size() - units.size()));
  }
  if (v.empty()) return std::nullopt;
  std::string s(v);
  if (std::count(s.begin(), s.end(), ',') + std::count(s.begin(), s.end(), '.') > 1) return std::nullopt;
  std::replace(s.begin(), s.end(), ',', '.');
  if (s.front() == '+') s.erase(0, 1);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out, std::chars_format::fixed);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return out;
}

inline void validate(const ConformanceRule& rule) {
  if (rule.rule_id.empty()) throw Error(Errc::schema, "rule_id must be non-empty");
  if (const auto* range = std::get_if<NumericRange>(&rule.check); range && range->min > range->max) {
    throw Error(Errc::schema, "rule " + rule.rule_id + ": numeric_range needs min <= max");
  }
  if (const auto* re = std::get_if<RegexMatch>(&rule.check)) {
    try {
      std::regex compiled(re->pattern);
    } catch (const std::regex_error&) {
      throw Error(Errc::schema, "rule " + rule.rule_id + ": invalid regex");
    }
  }
}

// One result per (rule, document of the rule's doc_type).
inline std::vector<ConformanceResult> check_conformance(const DocumentSet& ds, const std::vector<ConformanceRule>& rules) {
  std::vector<ConformanceResult> out;
  for (const auto& rule : rules) {
    validate(rule);
    std::optional<std::regex> re;
    if (const auto* m = std::get_if<RegexMatch>(&rule.check)) re.emplace(m->pattern);
    for (const auto& doc : ds.documents) {
      if (doc.doc_type != rule.doc_type) continue;
      ConformanceResult res{doc.doc_id, rule.rule_id, Outcome::fail, {}};
      const FieldBlock* field = doc.field(rule.field_key);
      if (std::holds_alternative<RequiredPresent>(rule.check)) {
        const bool present = field && !detail::trim(field->value).empty();
        res.outcome = present ? Outcome::pass : Outcome::fail;
        res.detail = present ? "present" : "missing field " + rule.field_key;
      } else if (!field) {
        res.outcome = Outcome::inapplicable;
        res.detail = "field " + rule.field_key + " absent";
      } else if (const auto* range = std::get_if<NumericRange>(&rule.check)) {
        auto value = parse_decimal(field->value, range->units);
        if (!value) {
          res.detail = "unparseable";
        } else if (*value < range->min || *value > range->max) {
          res.detail = format_double(*value) + " outside [" + format_double(range->min) + ", " +
                       format_double(range->max) + "]";
        } else {
          res.outcome = Outcome::pass;
          res.detail = format_double(*value) + (range->units.empty() ? "" : " " + range->units);
        }
      } else if (re) {
        const bool ok = std::regex_match(field->value, *re);
        res.outcome = ok ? Outcome::pass : Outcome::fail;
        res.detail = ok ? "matches" : "\"" + field->value + "\" does not match";
      } else if (const auto* set = std::get_if<ValueInSet>(&rule.check)) {
        const std::string v(detail::trim(field->value));
        const bool ok = std::find(set->values.begin(), set->values.end(), v) != set->values.end();
        res.outcome = ok ? Outcome::pass : Outcome::fail;
        res.detail = ok ? "allowed value" : "\"" + v + "\" not allowed";
      }
      if (!rule.standard_ref.empty()) res.detail += " (" + rule.standard_ref + ")";
      out.push_back(std::move(res));
    }
  }
  return out;
}

inline std::vector<ConformanceRule> rules_from_json(const json& j) {
  if (!j.is_array()) throw Error(Errc::schema, "rules file must be a JSON array");
  std::vector<ConformanceRule> rules;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string path = "/" + std::to_string(i);
    const json& jr = j[i];
    ConformanceRule r;
    r.rule_id = detail::require_string(jr, "rule_id", path);
    r.doc_type = parse_doc_type(detail::require_string(jr, "doc_type", path));
    r.field_key = detail::require_string(jr, "field_key", path);
    if (auto it = jr.find("standard_ref"); it != jr.end() && it->is_string()) r.standard_ref = it->get<std::string>();
    const json& check = detail::require(jr, "check", path);
    const std::string type = detail::require_string(check, "type", path + "/check");
    try {
      if (type == "numeric_range") {
        r.check = NumericRange{check.at("min").get<double>(), check.at("max").get<double>(), check.value("units", "")};
      } else if (type == "regex_match") {
        r.check = RegexMatch{check.at("pattern").get<std::string>()};
      } else if (type == "value_in_set") {
        r.check = ValueInSet{check.at("values").get<std::vector<std::string>>()};
      } else if (type == "required_present") {
        r.check = RequiredPresent{};
      } else {
        throw Error(Errc::schema, path + "/check/type \"" + type + "\" is unknown");
      }
    } catch (const json::exception& e) {
      throw Error(Errc::schema, path + "/check: " + e.what());
    }
    validate(r);
    rules.push_back(std::move(r));
  }
  return rules;
}

inline json to_json(const ConformanceRule& r) {
  json check = std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, NumericRange>) {
          return {{"type", "numeric_range"}, {"min", c.min}, {"max", c.max}, {"units", c.units}};
        } else if constexpr (std::is_same_v<T, RegexMatch>) {
          return {{"type", "regex_match"}, {"pattern", c.pattern}};
        } else if constexpr (std::is_same_v<T, ValueInSet>) {
          return {{"type", "value_in_set"}, {"values", c.values}};
        } else {
          return {{"type", "required_present"}};
        }
      },
      r.check);
  return {{"rule_id", r.rule_id},
          {"doc_type", doc_type_name(r.doc_type)},
          {"field_key", r.field_key},
          {"check", std::move(check)},
          {"standard_ref", r.standard_ref}};
}

inline json to_json(const ConformanceResult& r) {
  return {{"doc_id", r.doc_id}, {"rule_id", r.rule_id}, {"outcome", outcome_name(r.outcome)}, {"detail", r.detail}};
}

// ---------------------------------------------------------------------------
// Traceability

struct TraceStep {
  NodeId node = 0;
  Label label = Label::document;
  std::string name;             // doc_id, or key=value for topics
  std::optional<EdgeId> via;    // edge used to reach the node; empty for the root
  std::size_t depth = 0;        // document hops from the root
};

struct BrokenLink {
  std::string doc_id;
  std::string key;
  std::string value;
  std::string reason;
};

struct TraceReport {
  std::string root;
  std::vector<TraceStep> visited;
  std::vector<BrokenLink> broken_links;
  std::vector<std::string> flagged_databooks;  // incomplete databooks met on the way
  bool complete_trace = false;

  std::vector<std::string> visited_documents() const {
    std::vector<std::string> out;
    for (const auto& s : visited) {
      if (s.label == Label::document) out.push_back(s.name);
    }
    return out;
  }
};

inline constexpr std::size_t kDefaultTraceDepth = 16;

// Breadth-first walk document -> topic -> document, up to max_depth document
// hops. A topic referenced by a single document is a broken link; databooks
// containing a visited document that fail completeness are flagged.
inline TraceReport trace(const PropertyGraph& g, const std::string& root_doc_id,
                         std::size_t max_depth = kDefaultTraceDepth) {
  if (max_depth < 1) throw Error(Errc::invalid_argument, "max_depth must be >= 1");
  return g.read([&](const GraphData& d) {
    auto root = detail::find_by(d, Label::document, "doc_id", root_doc_id);
    if (!root) throw Error(Errc::unknown_node, "document " + root_doc_id);
    TraceReport r;
    r.root = root_doc_id;

    auto topic_documents = [&](NodeId topic) {
      std::set<NodeId> docs;
      for (EdgeId e : d.in[topic]) {
        const NodeId src = d.edges[e]->src;
        if (d.node(src).label == Label::document) docs.insert(src);
      }
      return docs;
    };

    std::set<NodeId> seen{*root};
    std::set<NodeId> databooks;
    struct Item {
      NodeId node;
      std::size_t hops;
    };
    std::deque<Item> queue{{*root, 0}};
    r.visited.push_back({*root, Label::document, root_doc_id, std::nullopt, 0});
    const std::size_t max_hops = 2 * max_depth;
    while (!queue.empty()) {
      const Item item = queue.front();
      queue.pop_front();
      const Node& n = d.node(item.node);
      if (n.label == Label::document) {
        for (EdgeId e : d.in[item.node]) {
          const Edge& edge = *d.edges[e];
          if (edge.rel_type == kContains && d.node(edge.src).label == Label::databook) databooks.insert(edge.src);
        }
        for (EdgeId e : d.out[item.node]) {
          const Edge& edge = *d.edges[e];
          const Node& t = d.node(edge.dst);
          if (t.label != Label::topic) continue;
          if (topic_documents(edge.dst).size() < 2) {
            r.broken_links.push_back({detail::prop_or_empty(n, "doc_id"), edge.rel_type,
                                      detail::prop_or_empty(t, "value"), "no other document references this value"});
          }
          if (item.hops + 1 > max_hops || !seen.insert(edge.dst).second) continue;
          r.visited.push_back({edge.dst, Label::topic,
                               detail::prop_or_empty(t, "key") + "=" + detail::prop_or_empty(t, "value"), e,
                               (item.hops + 1) / 2});
          queue.push_back({edge.dst, item.hops + 1});
        }
      } else {
        for (EdgeId e : d.in[item.node]) {
          const Edge& edge = *d.edges[e];
          const Node& doc = d.node(edge.src);
          if (doc.label != Label::document) continue;
          if (item.hops + 1 > max_hops || !seen.insert(edge.src).second) continue;
          r.visited.push_back({edge.src, Label::document, detail::prop_or_empty(doc, "doc_id"), e, (item.hops + 1) / 2});
          queue.push_back({edge.src, item.hops + 1});
        }
      }
    }
    for (NodeId book : databooks) {
      auto rep = detail::completeness_of(d, book, std::nullopt);
      if (!rep.is_complete) r.flagged_databooks.push_back(rep.databook_id);
    }
    r.complete_trace = r.broken_links.empty() && r.flagged_databooks.empty();
    return r;
  });
}

inline json to_json(const TraceReport& r) {
  json visited = json::array();
  for (const auto& s : r.visited) {
    visited.push_back({{"node", s.node},
                       {"label", label_name(s.label)},
                       {"name", s.name},
                       {"via", s.via ? json(*s.via) : json(nullptr)},
                       {"depth", s.depth}});
  }
  json broken = json::array();
  for (const auto& b : r.broken_links) {
    broken.push_back({{"doc_id", b.doc_id}, {"key", b.key}, {"value", b.value}, {"reason", b.reason}});
  }
  return {{"root", r.root},
          {"visited", std::move(visited)},
          {"broken_links", std::move(broken)},
          {"flagged_databooks", r.flagged_databooks},
          {"complete_trace", r.complete_trace}};
}

// ---------------------------------------------------------------------------
// OCR accuracy

enum class OcrClass { total_hit, partial_hit, inconsistency };

inline constexpr std::string_view ocr_class_name(OcrClass c) noexcept {
  switch (c) {
    case OcrClass::total_hit: return "total_hit";
    case OcrClass::partial_hit: return "partial_hit";
    case OcrClass::inconsistency: return "inconsistency";
  }
  return "inconsistency";
}

struct OcrAccuracyLabel {
  OcrClass cls = OcrClass::inconsistency;
  double similarity = 0.0;
};

struct OcrEvalConfig {
  // Case and punctuation folding only; dropping stopwords would hide OCR errors.
  FilterConfig normalize = [] {
    FilterConfig c;
    c.stopwords.clear();
    return c;
  }();
  double partial_threshold = 0.5;
};

inline OcrAccuracyLabel classify_ocr_accuracy(std::string_view ocr_value, std::string_view truth_value,
                                              const OcrEvalConfig& cfg = {}) {
  std::string truth;
  try {
    truth = normalize_tokens(truth_value, cfg.normalize);
  } catch (const Error& e) {
    if (e.code() != Errc::empty_after_normalize) throw;
    throw Error(Errc::empty_truth, "ground-truth value \"" + std::string(truth_value) + "\" is empty");
  }
  std::string ocr;
  try {
    ocr = normalize_tokens(ocr_value, cfg.normalize);
  } catch (const Error& e) {
    if (e.code() != Errc::empty_after_normalize) throw;
  }
  OcrAccuracyLabel label;
  label.similarity = sequence_matcher_ratio(ocr, truth, cfg.normalize.junk_chars);
  if (label.similarity >= 1.0) {
    label.cls = OcrClass::total_hit;
    label.similarity = 1.0;
  } else if (label.similarity >= cfg.partial_threshold) {
    label.cls = OcrClass::partial_hit;
  } else {
    label.cls = OcrClass::inconsistency;
  }
  return label;
}

struct AccuracySummary {
  double total_hit_pct = 0.0;
  double partial_pct = 0.0;
  double inconsistency_pct = 0.0;
  std::size_t fields = 0;
};

inline AccuracySummary corpus_accuracy_summary(const std::vector<OcrAccuracyLabel>& labels) {
  if (labels.empty()) throw Error(Errc::empty_corpus, "no classified fields");
  std::array<std::size_t, 3> counts{};
  for (const auto& l : labels) ++counts[static_cast<std::size_t>(l.cls)];
  const double n = static_cast<double>(labels.size());
  return {100.0 * static_cast<double>(counts[0]) / n, 100.0 * static_cast<double>(counts[1]) / n,
          100.0 * static_cast<double>(counts[2]) / n, labels.size()};
}

struct OcrPair {
  std::string ocr;
  std::string truth;
};

inline std::vector<OcrPair> ocr_pairs_from_json(const json& j) {
  if (!j.is_array()) throw Error(Errc::schema, "OCR pairs file must be a JSON array");
  std::vector<OcrPair> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string path = "/" + std::to_string(i);
    out.push_back({detail::require_string(j[i], "ocr", path), detail::require_string(j[i], "truth", path)});
  }
  return out;
}

inline json to_json(const OcrPair& p) { return {{"ocr", p.ocr}, {"truth", p.truth}}; }

}  // namespace graphled
