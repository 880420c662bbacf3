#pragma once

// Command-line front end. run() parses arguments and writes to the given
// streams so the whole surface can be driven in-process.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphled/centrality.hpp"
#include "graphled/graph_builder.hpp"
#include "graphled/inspection.hpp"
#include "graphled/service.hpp"
#include "graphled/synth.hpp"
#include "graphled/workload.hpp"

namespace graphled::cli {

inline constexpr int kOk = 0;
inline constexpr int kInspectionFailed = 1;
inline constexpr int kError = 2;

namespace detail {

inline FilterConfig load_filters(const std::string& path) {
  if (path.empty()) return {};
  const auto dir = std::filesystem::path(path).parent_path().string();
  auto cfg = parse_filter_config(read_text_file(path), dir.empty() ? "." : dir);
  cfg.validate();
  return cfg;
}

inline TopicKeys topic_keys(const std::vector<std::string>& keys) { return {{keys.begin(), keys.end()}}; }

inline json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::syntax, path + ": " + e.what());
  }
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::io, "cannot write " + path);
  os << content;
  if (!os) throw Error(Errc::io, "write failed for " + path);
}

inline std::string percent(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * ratio);
  return buf;
}

}  // namespace detail

// Text printed by `disambiguate`.
inline std::string disambiguation_summary(const DisambiguationReport& r, std::optional<std::size_t> ground_truth) {
  std::string out = "distinct_raw " + std::to_string(r.distinct_raw()) + "\n";
  out += "canonical " + std::to_string(r.distinct_canonical()) + "\n";
  out += "removed " + std::to_string(r.removed_count) + "\n";
  if (r.distinct_raw() == 0) return out;
  const auto m = ambiguity_metrics(r, ground_truth);
  out += "reduction " + detail::percent(m.reduction_pct) + "\n";
  if (m.removal_pct) out += "removal " + detail::percent(*m.removal_pct) + "\n";
  return out;
}

// Text printed by `ocr-eval`.
inline std::string ocr_summary(const AccuracySummary& s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "fields %zu\ntotal_hit %.2f%%\npartial_hit %.2f%%\ninconsistency %.2f%%\n", s.fields,
                s.total_hit_pct, s.partial_pct, s.inconsistency_pct);
  return buf;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Document-graph ingestion, disambiguation, inspection and benchmarking", "graphled"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "graphled 0.1.0");

  int status = kOk;
  std::function<void()> action;

  // ingest
  std::string in_path, out_path, config_path, report_path, spec_path, rules_path;
  std::vector<std::string> topics;
  unsigned workers = 1;
  auto* ingest = app.add_subcommand("ingest", "Parse, disambiguate and build a graph file");
  ingest->add_option("loader", in_path, "Loader JSON")->required()->check(CLI::ExistingFile);
  ingest->add_option("--out", out_path, "Graph file to write")->required();
  ingest->add_option("--config", config_path, "Filter configuration")->check(CLI::ExistingFile);
  ingest->add_option("--topics", topics, "Topic keys (default: keys flagged link)")->delimiter(',');
  ingest->add_option("--workers", workers, "Comparison threads")->check(CLI::PositiveNumber);
  ingest->callback([&] {
    action = [&] {
      const auto ds = parse_loader_json(read_text_file(in_path));
      auto r = run_pipeline(ds, detail::load_filters(config_path), detail::topic_keys(topics), {workers});
      const auto bytes = save(r.graph, out_path);
      out << "documents " << ds.documents.size() << "\ndatabooks " << ds.databooks.size() << "\nmentions " << r.mentions
          << "\nnodes " << r.graph.node_count() << "\nedges " << r.graph.edge_count() << "\nbytes " << bytes << "\n";
    };
  });

  // disambiguate
  std::optional<std::size_t> ground_truth;
  auto* dis = app.add_subcommand("disambiguate", "Run the filter pipeline and report ambiguity metrics");
  dis->add_option("loader", in_path, "Loader JSON")->required()->check(CLI::ExistingFile);
  dis->add_option("--report", report_path, "Disambiguation report JSON to write");
  dis->add_option("--config", config_path, "Filter configuration")->check(CLI::ExistingFile);
  dis->add_option("--topics", topics, "Topic keys")->delimiter(',');
  dis->add_option("--ground-truth", ground_truth, "Number of true entities (enables removal %)");
  dis->add_option("--workers", workers, "Comparison threads")->check(CLI::PositiveNumber);
  dis->callback([&] {
    action = [&] {
      const auto ds = parse_loader_json(read_text_file(in_path));
      const auto report =
          disambiguate(extract_entities(ds, detail::topic_keys(topics)), detail::load_filters(config_path), {workers});
      if (!report_path.empty()) detail::write_file(report_path, to_json(report).dump(2) + "\n");
      out << disambiguation_summary(report, ground_truth);
    };
  });

  // inspect
  auto* inspect = app.add_subcommand("inspect", "Completeness, conformance and traceability checks");
  inspect->require_subcommand(1);
  std::string graph_path, target_id;
  std::size_t max_depth = kDefaultTraceDepth;
  auto* comp = inspect->add_subcommand("completeness", "Check databooks; exit 0 iff all complete");
  comp->add_option("graph", graph_path, "Graph file")->required()->check(CLI::ExistingFile);
  comp->add_option("--databook", target_id, "Databook id (default: every databook)");
  comp->callback([&] {
    action = [&] {
      const auto g = load(graph_path);
      std::vector<std::string> ids;
      if (!target_id.empty()) {
        ids.push_back(target_id);
      } else {
        for (NodeId id : g.nodes_with_label(Label::databook)) ids.push_back(g.node(id)->props.at("databook_id"));
      }
      json reports = json::array();
      for (const auto& id : ids) {
        const auto r = check_completeness(g, id);
        if (!r.is_complete) status = kInspectionFailed;
        reports.push_back(to_json(r));
      }
      out << reports.dump(2) << "\n";
    };
  });
  auto* conf = inspect->add_subcommand("conformance", "Check field rules; exit 0 iff nothing fails");
  conf->add_option("loader", in_path, "Loader JSON")->required()->check(CLI::ExistingFile);
  conf->add_option("--rules", rules_path, "Rules JSON")->required()->check(CLI::ExistingFile);
  conf->callback([&] {
    action = [&] {
      const auto ds = parse_loader_json(read_text_file(in_path));
      json results = json::array();
      for (const auto& r : check_conformance(ds, rules_from_json(detail::read_json_file(rules_path)))) {
        if (r.outcome == Outcome::fail) status = kInspectionFailed;
        results.push_back(to_json(r));
      }
      out << results.dump(2) << "\n";
    };
  });
  auto* tr = inspect->add_subcommand("trace", "Trace a document; exit 0 iff the trace is complete");
  tr->add_option("graph", graph_path, "Graph file")->required()->check(CLI::ExistingFile);
  tr->add_option("--doc", target_id, "Root doc_id")->required();
  tr->add_option("--max-depth", max_depth, "Maximum document hops")->check(CLI::PositiveNumber);
  tr->callback([&] {
    action = [&] {
      const auto r = trace(load(graph_path), target_id, max_depth);
      if (!r.complete_trace) status = kInspectionFailed;
      out << to_json(r).dump(2) << "\n";
    };
  });

  // centrality
  std::string metric_name = "relevance";
  std::size_t top = 0;
  auto* cen = app.add_subcommand("centrality", "Centrality table as CSV, highest score first");
  cen->add_option("graph", graph_path, "Graph file")->required()->check(CLI::ExistingFile);
  cen->add_option("--metric", metric_name, "degree|betweenness|closeness|eigenvector|relevance")
      ->check(CLI::IsMember({"degree", "betweenness", "closeness", "eigenvector", "relevance"}));
  cen->add_option("--top", top, "Rows to print (0 = all)");
  cen->add_option("--workers", workers, "Betweenness threads")->check(CLI::PositiveNumber);
  cen->callback([&] {
    action = [&] {
      CentralityOptions co;
      co.workers = workers;
      const auto table = compute_centrality(load(graph_path), co);
      out << to_csv(rank_by(table, *parse_metric(metric_name), top));
    };
  });

  // bench
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> bench_n, concurrency;
  std::string json_path;
  auto* bench = app.add_subcommand("bench", "Run the synthetic workload benchmark");
  bench->add_option("--spec", spec_path, "Workload spec JSON (default: reference mix)")->check(CLI::ExistingFile);
  bench->add_option("--out", out_path, "CSV report path (default: stdout)");
  bench->add_option("--json", json_path, "Also write the JSON report");
  bench->add_option("--seed", seed, "RNG seed");
  bench->add_option("-n", bench_n, "Target runs per write pattern");
  bench->add_option("--concurrency", concurrency, "Parallel streams");
  bench->callback([&] {
    action = [&] {
      WorkloadSpec spec = spec_path.empty() ? WorkloadSpec{} : workload_spec_from_json(detail::read_json_file(spec_path));
      if (seed) spec.seed = *seed;
      if (bench_n) spec.n = *bench_n;
      if (concurrency) spec.concurrency = *concurrency;
      PropertyGraph store;
      const auto report = run_benchmark(spec, store);
      const auto audit = store.audit();
      const std::string csv = to_csv(report);
      if (out_path.empty()) {
        out << csv;
      } else {
        detail::write_file(out_path, csv);
      }
      if (!json_path.empty()) {
        json j = to_json(report);
        j["audit_discrepancies"] = audit.discrepancies;
        detail::write_file(json_path, j.dump(2) + "\n");
      }
      err << "nodes " << report.node_count << " edges " << report.edge_count << " wall_ms "
          << format_double(report.wall_ms) << " audit " << audit.discrepancies << "\n";
      if (!audit.ok()) status = kError;
    };
  });

  // ocr-eval
  auto* ocr = app.add_subcommand("ocr-eval", "Classify OCR output against ground truth");
  ocr->add_option("pairs", in_path, "JSON array of {ocr, truth}")->required()->check(CLI::ExistingFile);
  ocr->callback([&] {
    action = [&] {
      std::vector<OcrAccuracyLabel> labels;
      for (const auto& p : ocr_pairs_from_json(detail::read_json_file(in_path))) {
        labels.push_back(classify_ocr_accuracy(p.ocr, p.truth));
      }
      out << ocr_summary(corpus_accuracy_summary(labels));
    };
  });

  // serve
  std::optional<std::string> listen;
  std::string cors = "*";
  auto* serve = app.add_subcommand("serve", "Start the HTTP service");
  serve->add_option("--listen", listen, "HOST:PORT (default: $GRAPHLED_LISTEN or 127.0.0.1:8098)");
  serve->add_option("--config", config_path, "Filter configuration")->check(CLI::ExistingFile);
  serve->add_option("--cors-origin", cors, "Access-Control-Allow-Origin value");
  serve->add_option("--workers", workers, "Worker threads for comparisons and betweenness")->check(CLI::PositiveNumber);
  serve->callback([&] {
    action = [&] {
      const auto addr = resolve_listen(listen);
      ServiceOptions so;
      so.cors_origin = cors;
      so.filters = detail::load_filters(config_path);
      so.workers = workers;
      Service svc(so);
      err << "listening on " << addr.host << ":" << addr.port << "\n";
      if (!svc.listen(addr)) throw Error(Errc::io, "cannot listen on " + addr.host + ":" + std::to_string(addr.port));
    };
  });

  // synth
  std::string corpus;
  std::size_t count = 0;
  auto* syn = app.add_subcommand("synth", "Write a seeded synthetic corpus");
  syn->add_option("corpus", corpus, "suppliers|ocr-easy|ocr-difficult|star|isolated")
      ->required()
      ->check(CLI::IsMember({"suppliers", "ocr-easy", "ocr-difficult", "star", "isolated"}));
  syn->add_option("--out", out_path, "Output path (default: stdout)");
  syn->add_option("--seed", seed, "RNG seed");
  syn->add_option("--count", count, "OCR fields, or star documents");
  syn->callback([&] {
    action = [&] {
      std::string text;
      if (corpus == "suppliers") {
        synth::SupplierCorpusOptions so;
        if (seed) so.seed = *seed;
        text = serialize_loader_json(synth::supplier_corpus(so).documents, 2);
      } else if (corpus == "ocr-easy" || corpus == "ocr-difficult") {
        const auto profile = corpus == "ocr-easy" ? synth::easy_profile() : synth::difficult_profile();
        json arr = json::array();
        for (const auto& p : synth::ocr_corpus(profile, count ? count : 2000, seed.value_or(7))) arr.push_back(to_json(p));
        text = arr.dump(2);
      } else if (corpus == "star") {
        text = serialize_loader_json(synth::star_fixture(count ? count : 5), 2);
      } else {
        text = serialize_loader_json(synth::isolated_fixture(), 2);
      }
      text += "\n";
      if (out_path.empty()) {
        out << text;
      } else {
        detail::write_file(out_path, text);
      }
    };
  });

  std::vector<const char*> argv{"graphled"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }
  try {
    if (action) action();
  } catch (const Error& e) {
    err << to_json(api_error(e)).dump() << "\n";
    return kError;
  } catch (const std::exception& e) {
    err << to_json(ApiError{500, "InternalError", e.what()}).dump() << "\n";
    return kError;
  }
  return status;
}

inline int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace graphled::cli
