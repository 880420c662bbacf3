#pragma once

// Entity disambiguation: a staged filter pipeline (stopwords, Levenshtein,
// LCS, sequence matcher) that clusters spelling variants of one entity and
// keeps an audit trail of every change.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "graphled/error.hpp"
#include "graphled/ingest.hpp"
#include "graphled/similarity.hpp"
#include "graphled/union_find.hpp"
#include "graphled/utf8.hpp"

namespace graphled {

inline std::set<std::string> default_stopwords() {
  return {"the", "of",   "and",  "group", "inc",     "incorporated", "ltd",  "ltda",
          "llc", "co",   "corp", "corporation", "company", "sa",   "gmbh", "plc"};
}

inline CharSet ascii_punctuation() {
  CharSet out;
  for (char32_t c = 0x21; c < 0x7F; ++c) {
    const bool alnum = (c >= U'0' && c <= U'9') || (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
    if (!alnum) out.insert(c);
  }
  return out;
}

struct LengthBand {
  double low = 0.8;
  double high = 1.25;
};

struct FilterConfig {
  std::set<std::string> stopwords = default_stopwords();
  double lev_max_norm_dist = 0.2;
  LengthBand lev_len_ratio_band;
  double lcs_min_sim = 0.8;
  double sm_min_ratio = 0.85;
  // Sequence-matcher junk.
  CharSet junk_chars{U' '};
  // Characters that normalization turns into token separators.
  CharSet punctuation = ascii_punctuation();

  void validate() const {
    auto ratio = [](double v, const char* name) {
      if (!(v >= 0.0 && v <= 1.0)) throw Error(Errc::schema, std::string(name) + " must lie in [0,1]");
    };
    ratio(lev_max_norm_dist, "lev_max_norm_dist");
    ratio(lcs_min_sim, "lcs_min_sim");
    ratio(sm_min_ratio, "sm_min_ratio");
    if (!(lev_len_ratio_band.low >= 0.0 && lev_len_ratio_band.low <= 1.0 && lev_len_ratio_band.high >= 1.0)) {
      throw Error(Errc::schema, "lev_len_ratio_band must satisfy 0 <= low <= 1 <= high");
    }
  }
};

enum class Stage { stopword, levenshtein, lcs, sequence_matcher, canonicalize };

inline constexpr std::string_view stage_name(Stage s) noexcept {
  switch (s) {
    case Stage::stopword: return "stopword";
    case Stage::levenshtein: return "levenshtein";
    case Stage::lcs: return "lcs";
    case Stage::sequence_matcher: return "sequence_matcher";
    case Stage::canonicalize: return "canonicalize";
  }
  return "stopword";
}

inline Stage parse_stage(std::string_view name) {
  for (auto s : {Stage::stopword, Stage::levenshtein, Stage::lcs, Stage::sequence_matcher, Stage::canonicalize}) {
    if (stage_name(s) == name) return s;
  }
  throw Error(Errc::schema, "unknown provenance stage \"" + std::string(name) + "\"");
}

struct ProvenanceRecord {
  EntityMention mention;
  Stage stage = Stage::stopword;
  std::string before;
  std::string after;

  friend bool operator==(const ProvenanceRecord&, const ProvenanceRecord&) = default;
};

struct Cluster {
  std::string key;
  std::string canonical;
  std::vector<std::string> members;  // sorted raw values
  std::size_t mention_count = 0;

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

struct DisambiguationReport {
  // topic key -> raw value -> canonical value
  std::map<std::string, std::map<std::string, std::string>> canonical_of;
  std::vector<Cluster> clusters;
  std::vector<ProvenanceRecord> provenance;
  std::size_t removed_count = 0;

  const std::string* canonical(std::string_view key, std::string_view raw) const {
    auto k = canonical_of.find(std::string(key));
    if (k == canonical_of.end()) return nullptr;
    auto r = k->second.find(std::string(raw));
    return r == k->second.end() ? nullptr : &r->second;
  }

  std::size_t distinct_raw() const {
    std::size_t n = 0;
    for (const auto& [key, m] : canonical_of) n += m.size();
    return n;
  }

  std::size_t distinct_canonical() const { return clusters.size(); }

  friend bool operator==(const DisambiguationReport&, const DisambiguationReport&) = default;
};

namespace detail {

inline char32_t fold_case(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 32;
  // Latin-1 supplement capitals, excluding the multiplication sign.
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  return c;
}

inline bool is_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v' || c == 0xA0;
}

}  // namespace detail

// Comparison key for a raw value: case folded, punctuation split, stopword
// tokens dropped, whitespace collapsed. Throws Errc::empty_after_normalize.
inline std::string normalize_tokens(std::string_view value, const FilterConfig& cfg) {
  std::u32string text = utf8::decode(value);
  for (auto& c : text) {
    c = detail::fold_case(c);
    if (cfg.punctuation.contains(c)) c = U' ';
  }
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && detail::is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !detail::is_space(text[i])) ++i;
    if (start == i) break;
    std::string token = utf8::encode(std::u32string_view(text).substr(start, i - start));
    if (cfg.stopwords.contains(token)) continue;
    if (!out.empty()) out.push_back(' ');
    out += token;
  }
  if (out.empty()) throw Error(Errc::empty_after_normalize, "\"" + std::string(value) + "\" has no tokens left");
  return out;
}

inline bool lev_accepts(std::u32string_view a, std::u32string_view b, const FilterConfig& cfg) {
  if (a.empty() && b.empty()) return false;
  const double longest = static_cast<double>(std::max(a.size(), b.size()));
  const double ratio = static_cast<double>(std::min(a.size(), b.size())) / longest;
  if (ratio < cfg.lev_len_ratio_band.low || ratio > cfg.lev_len_ratio_band.high) return false;
  return static_cast<double>(levenshtein_distance(a, b)) / longest <= cfg.lev_max_norm_dist;
}

inline bool lev_accepts(std::string_view a, std::string_view b, const FilterConfig& cfg) {
  return lev_accepts(utf8::decode(a), utf8::decode(b), cfg);
}

inline bool lcs_accepts(std::u32string_view a, std::u32string_view b, const FilterConfig& cfg) {
  if (a.empty() && b.empty()) return false;
  const double longest = static_cast<double>(std::max(a.size(), b.size()));
  return static_cast<double>(lcs_length(a, b)) / longest >= cfg.lcs_min_sim;
}

inline bool lcs_accepts(std::string_view a, std::string_view b, const FilterConfig& cfg) {
  return lcs_accepts(utf8::decode(a), utf8::decode(b), cfg);
}

inline bool sm_accepts(std::u32string_view a, std::u32string_view b, const FilterConfig& cfg) {
  if (a.empty() && b.empty()) return false;
  return sequence_matcher_ratio(a, b, cfg.junk_chars) >= cfg.sm_min_ratio;
}

inline bool sm_accepts(std::string_view a, std::string_view b, const FilterConfig& cfg) {
  return sm_accepts(utf8::decode(a), utf8::decode(b), cfg);
}

// First stage that links the pair, in pipeline order.
inline std::optional<Stage> linking_stage(std::u32string_view a, std::u32string_view b, const FilterConfig& cfg) {
  if (lev_accepts(a, b, cfg)) return Stage::levenshtein;
  if (lcs_accepts(a, b, cfg)) return Stage::lcs;
  if (sm_accepts(a, b, cfg)) return Stage::sequence_matcher;
  return std::nullopt;
}

struct DisambiguateOptions {
  // Pair comparisons are sharded across this many threads; output is
  // identical for every value.
  unsigned workers = 1;
};

namespace detail {

struct PairLink {
  std::size_t i;
  std::size_t j;
  Stage stage;
};

inline std::vector<PairLink> compare_pairs(const std::vector<std::u32string>& forms, const FilterConfig& cfg,
                                           unsigned workers) {
  const std::size_t n = forms.size();
  auto shard = [&](std::size_t begin, std::size_t step, std::vector<PairLink>& out) {
    for (std::size_t i = begin; i < n; i += step) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (auto s = linking_stage(forms[i], forms[j], cfg)) out.push_back({i, j, *s});
      }
    }
  };
  std::vector<PairLink> links;
  if (workers <= 1 || n < 64) {
    shard(0, 1, links);
    return links;
  }
  std::vector<std::vector<PairLink>> parts(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back([&, w] { shard(w, workers, parts[w]); });
  }
  for (auto& p : parts) links.insert(links.end(), p.begin(), p.end());
  std::sort(links.begin(), links.end(),
            [](const PairLink& x, const PairLink& y) { return std::tie(x.i, x.j) < std::tie(y.i, y.j); });
  return links;
}

}  // namespace detail

// Clusters mentions per topic key. Deterministic and independent of the
// input order of `mentions`.
inline DisambiguationReport disambiguate(std::vector<EntityMention> mentions, const FilterConfig& cfg,
                                         const DisambiguateOptions& opts = {}) {
  cfg.validate();
  std::sort(mentions.begin(), mentions.end());

  DisambiguationReport report;
  std::map<std::string, std::vector<const EntityMention*>> by_key;
  for (const auto& m : mentions) by_key[m.key].push_back(&m);

  std::vector<ProvenanceRecord> normalize_log, merge_log, canon_log;

  for (const auto& [key, group] : by_key) {
    // Distinct raw values in sorted order, with mention counts and the first
    // mention of each (used as the provenance anchor for merges).
    std::vector<std::string> raws;
    std::vector<std::size_t> counts;
    std::vector<const EntityMention*> anchor;
    std::map<std::string, std::size_t> raw_index;
    for (const EntityMention* m : group) {
      auto [it, inserted] = raw_index.try_emplace(m->raw_value, raws.size());
      if (inserted) {
        raws.push_back(m->raw_value);
        counts.push_back(0);
        anchor.push_back(m);
      }
      ++counts[it->second];
    }
    // raw_index iteration is sorted; re-map so indices follow sorted order.
    {
      std::vector<std::string> sorted_raws;
      std::vector<std::size_t> sorted_counts;
      std::vector<const EntityMention*> sorted_anchor;
      for (auto& [raw, idx] : raw_index) {
        sorted_raws.push_back(raws[idx]);
        sorted_counts.push_back(counts[idx]);
        sorted_anchor.push_back(anchor[idx]);
        idx = sorted_raws.size() - 1;
      }
      raws = std::move(sorted_raws);
      counts = std::move(sorted_counts);
      anchor = std::move(sorted_anchor);
    }

    // Normalize; identical comparison keys share one form.
    std::vector<std::optional<std::size_t>> form_of(raws.size());
    std::vector<std::string> normalized(raws.size());
    std::map<std::string, std::size_t> form_index;
    std::vector<std::u32string> forms;
    std::vector<std::size_t> form_first_raw;
    for (std::size_t r = 0; r < raws.size(); ++r) {
      try {
        normalized[r] = normalize_tokens(raws[r], cfg);
      } catch (const Error& e) {
        if (e.code() != Errc::empty_after_normalize) throw;
        continue;
      }
      auto [it, inserted] = form_index.try_emplace(normalized[r], forms.size());
      if (inserted) {
        forms.push_back(utf8::decode(normalized[r]));
        form_first_raw.push_back(r);
      }
      form_of[r] = it->second;
    }
    for (const EntityMention* m : group) {
      const std::size_t r = raw_index.at(m->raw_value);
      if (normalized[r] != m->raw_value) normalize_log.push_back({*m, Stage::stopword, m->raw_value, normalized[r]});
    }

    UnionFind uf(raws.size());
    auto record_merge = [&](std::size_t a, std::size_t b, Stage stage) {
      if (uf.unite(a, b)) merge_log.push_back({*anchor[a], stage, raws[a], raws[b]});
    };
    for (std::size_t r = 0; r < raws.size(); ++r) {
      if (form_of[r] && form_first_raw[*form_of[r]] != r) {
        record_merge(form_first_raw[*form_of[r]], r, Stage::levenshtein);
      }
    }
    for (const auto& link : detail::compare_pairs(forms, cfg, opts.workers)) {
      record_merge(form_first_raw[link.i], form_first_raw[link.j], link.stage);
    }

    // Canonical = modal raw value, lexicographically smallest on ties.
    std::map<std::size_t, std::vector<std::size_t>> members;
    for (std::size_t r = 0; r < raws.size(); ++r) members[uf.find(r)].push_back(r);
    auto& canon_map = report.canonical_of[key];
    std::vector<Cluster> key_clusters;
    for (const auto& [root, rs] : members) {
      std::size_t best = rs.front();
      std::size_t total = 0;
      for (std::size_t r : rs) {
        total += counts[r];
        if (counts[r] > counts[best]) best = r;
      }
      Cluster c{key, raws[best], {}, total};
      for (std::size_t r : rs) {
        c.members.push_back(raws[r]);
        canon_map[raws[r]] = raws[best];
      }
      key_clusters.push_back(std::move(c));
    }
    std::sort(key_clusters.begin(), key_clusters.end(),
              [](const Cluster& x, const Cluster& y) { return x.canonical < y.canonical; });
    for (auto& c : key_clusters) report.clusters.push_back(std::move(c));
    report.removed_count += raws.size() - members.size();

    for (const EntityMention* m : group) {
      const std::string& canon = canon_map.at(m->raw_value);
      if (canon != m->raw_value) canon_log.push_back({*m, Stage::canonicalize, m->raw_value, canon});
    }
  }

  report.provenance.reserve(normalize_log.size() + merge_log.size() + canon_log.size());
  for (auto* log : {&normalize_log, &merge_log, &canon_log}) {
    for (auto& rec : *log) report.provenance.push_back(std::move(rec));
  }
  return report;
}

struct AmbiguityMetrics {
  std::optional<double> removal_pct;  // ratio in [0,1]
  double reduction_pct = 0.0;         // ratio in [0,1]
};

inline AmbiguityMetrics ambiguity_metrics(std::size_t removed, std::size_t distinct_raw,
                                          std::optional<std::size_t> ground_truth = std::nullopt) {
  if (distinct_raw == 0) throw Error(Errc::division_domain, "no raw values");
  AmbiguityMetrics m;
  m.reduction_pct = static_cast<double>(removed) / static_cast<double>(distinct_raw);
  if (ground_truth) {
    if (*ground_truth > distinct_raw) throw Error(Errc::division_domain, "ground truth exceeds distinct raw values");
    const std::size_t ambiguous = distinct_raw - *ground_truth;
    if (ambiguous == 0) {
      if (removed != 0) throw Error(Errc::division_domain, "values removed although none were ambiguous");
      m.removal_pct = 1.0;
    } else {
      m.removal_pct = static_cast<double>(removed) / static_cast<double>(ambiguous);
    }
  }
  return m;
}

inline AmbiguityMetrics ambiguity_metrics(const DisambiguationReport& report,
                                          std::optional<std::size_t> ground_truth = std::nullopt) {
  return ambiguity_metrics(report.removed_count, report.distinct_raw(), ground_truth);
}

// ---------------------------------------------------------------------------
// Serialization and configuration files

inline json to_json(const DisambiguationReport& r) {
  json clusters = json::array();
  for (const auto& c : r.clusters) {
    clusters.push_back(
        {{"key", c.key}, {"canonical", c.canonical}, {"members", c.members}, {"mention_count", c.mention_count}});
  }
  json prov = json::array();
  for (const auto& p : r.provenance) {
    prov.push_back({{"doc_id", p.mention.doc_id},
                    {"key", p.mention.key},
                    {"raw_value", p.mention.raw_value},
                    {"stage", stage_name(p.stage)},
                    {"before", p.before},
                    {"after", p.after}});
  }
  return {{"canonical_of", r.canonical_of},
          {"clusters", std::move(clusters)},
          {"provenance", std::move(prov)},
          {"removed_count", r.removed_count},
          {"distinct_raw", r.distinct_raw()},
          {"distinct_canonical", r.distinct_canonical()}};
}

inline DisambiguationReport report_from_json(const json& j) {
  try {
    DisambiguationReport r;
    r.canonical_of = j.at("canonical_of").get<std::map<std::string, std::map<std::string, std::string>>>();
    for (const auto& c : j.at("clusters")) {
      r.clusters.push_back({c.at("key").get<std::string>(), c.at("canonical").get<std::string>(),
                            c.at("members").get<std::vector<std::string>>(), c.at("mention_count").get<std::size_t>()});
    }
    for (const auto& p : j.at("provenance")) {
      r.provenance.push_back({{p.at("doc_id").get<std::string>(), p.at("key").get<std::string>(),
                               p.at("raw_value").get<std::string>()},
                              parse_stage(p.at("stage").get<std::string>()),
                              p.at("before").get<std::string>(),
                              p.at("after").get<std::string>()});
    }
    r.removed_count = j.at("removed_count").get<std::size_t>();
    return r;
  } catch (const json::exception& e) {
    throw Error(Errc::schema, std::string("disambiguation report: ") + e.what());
  }
}

// One token per line; '#' starts a comment.
inline std::set<std::string> parse_stopwords(std::string_view text) {
  std::set<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto tok = detail::trim(line);
    if (tok.empty()) continue;
    std::u32string folded = utf8::decode(tok);
    for (auto& c : folded) c = detail::fold_case(c);
    out.insert(utf8::encode(folded));
  }
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

inline std::string parse_quoted(std::string_view v, std::size_t line_no) {
  if (v.size() < 2 || v.front() != '"' || v.back() != '"') {
    throw Error(Errc::schema, "line " + std::to_string(line_no) + ": expected a quoted string");
  }
  std::string out;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] == '\\' && i + 2 < v.size()) {
      ++i;
      switch (v[i]) {
        case 't': out.push_back('\t'); break;
        case 'n': out.push_back('\n'); break;
        default: out.push_back(v[i]);
      }
    } else {
      out.push_back(v[i]);
    }
  }
  return out;
}

inline double parse_number(std::string_view v, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const std::string s(v);
    double d = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw Error(Errc::schema, "line " + std::to_string(line_no) + ": expected a number");
  }
}

inline std::vector<std::string> parse_array(std::string_view v, std::size_t line_no) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
    throw Error(Errc::schema, "line " + std::to_string(line_no) + ": expected an array");
  }
  std::vector<std::string> items;
  std::string_view body = v.substr(1, v.size() - 2);
  while (!trim(body).empty()) {
    body = trim(body);
    std::size_t end = 0;
    if (body.front() == '"') {
      end = body.find('"', 1);
      if (end == std::string_view::npos) throw Error(Errc::schema, "line " + std::to_string(line_no) + ": unterminated string");
      ++end;
    } else {
      end = body.find(',');
      if (end == std::string_view::npos) end = body.size();
    }
    items.emplace_back(trim(body.substr(0, end)));
    body = body.substr(end);
    body = trim(body);
    if (!body.empty()) {
      if (body.front() != ',') throw Error(Errc::schema, "line " + std::to_string(line_no) + ": expected ','");
      body = body.substr(1);
    }
  }
  return items;
}

inline CharSet to_charset(const std::string& s) {
  CharSet out;
  for (char32_t c : utf8::decode(s)) out.insert(c);
  return out;
}

}  // namespace detail

// key = value config. Recognised keys: lev_max_norm_dist, lev_len_ratio_band
// ([low, high]), lcs_min_sim, sm_min_ratio, junk_chars ("..."), punctuation
// ("..."), stopwords (["..."]), stopwords_file ("path", relative to base_dir).
// Unset keys keep their defaults.
inline FilterConfig parse_filter_config(std::string_view text, const std::string& base_dir = ".") {
  FilterConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = detail::trim(line);
    if (sv.empty() || sv.front() == '#' || sv.front() == '[') continue;
    const auto eq = sv.find('=');
    if (eq == std::string_view::npos) throw Error(Errc::schema, "line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(detail::trim(sv.substr(0, eq)));
    std::string_view value = detail::trim(sv.substr(eq + 1));
    // Strip a trailing comment outside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < value.size(); ++i) {
      if (value[i] == '"' && (i == 0 || value[i - 1] != '\\')) quoted = !quoted;
      if (value[i] == '#' && !quoted) {
        value = detail::trim(value.substr(0, i));
        break;
      }
    }
    if (key == "lev_max_norm_dist") {
      cfg.lev_max_norm_dist = detail::parse_number(value, line_no);
    } else if (key == "lcs_min_sim") {
      cfg.lcs_min_sim = detail::parse_number(value, line_no);
    } else if (key == "sm_min_ratio") {
      cfg.sm_min_ratio = detail::parse_number(value, line_no);
    } else if (key == "lev_len_ratio_band") {
      auto items = detail::parse_array(value, line_no);
      if (items.size() != 2) throw Error(Errc::schema, "line " + std::to_string(line_no) + ": band needs two numbers");
      cfg.lev_len_ratio_band = {detail::parse_number(items[0], line_no), detail::parse_number(items[1], line_no)};
    } else if (key == "junk_chars") {
      cfg.junk_chars = detail::to_charset(detail::parse_quoted(value, line_no));
    } else if (key == "punctuation") {
      cfg.punctuation = detail::to_charset(detail::parse_quoted(value, line_no));
    } else if (key == "stopwords") {
      std::string joined;
      for (const auto& item : detail::parse_array(value, line_no)) {
        joined += (item.size() >= 2 && item.front() == '"') ? detail::parse_quoted(item, line_no) : item;
        joined += '\n';
      }
      cfg.stopwords = parse_stopwords(joined);
    } else if (key == "stopwords_file") {
      std::string path = detail::parse_quoted(value, line_no);
      if (!path.empty() && path.front() != '/') path = base_dir + "/" + path;
      cfg.stopwords = parse_stopwords(read_text_file(path));
    } else {
      throw Error(Errc::schema, "line " + std::to_string(line_no) + ": unknown key \"" + key + "\"");
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace graphled
