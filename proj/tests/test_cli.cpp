#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "graphled/cli.hpp"
#include "graphled/synth.hpp"

using namespace graphled;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("graphled-cli-" + std::to_string(::getpid()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string synth(const std::string& corpus) {
    const auto p = path(corpus + ".json");
    EXPECT_EQ(run({"synth", corpus, "--out", p}).code, cli::kOk);
    return p;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, DisambiguateMatchesLibrary) {
  const auto loader = synth("suppliers");
  const auto r = run({"disambiguate", loader, "--ground-truth", "17", "--report", path("report.json")});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto corpus = synth::supplier_corpus();
  const auto report = disambiguate(extract_entities(corpus.documents), FilterConfig{});
  EXPECT_EQ(r.out, cli::disambiguation_summary(report, 17));
  EXPECT_NE(r.out.find("distinct_raw 128\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("canonical 18\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("reduction 85.94%\n"), std::string::npos) << r.out;
  const auto j = json::parse(slurp(path("report.json")));
  EXPECT_EQ(report_from_json(j).removed_count, report.removed_count);
}

TEST_F(CliTest, IngestAndCentralityMatchLibrary) {
  const auto loader = synth("star");
  const auto graph = path("star.graph");
  const auto r = run({"ingest", loader, "--out", graph});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_NE(r.out.find("nodes 7\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("edges 10\n"), std::string::npos) << r.out;
  const auto direct = run_pipeline(synth::star_fixture());
  EXPECT_TRUE(same_graph(load(graph), direct.graph));

  const auto c = run({"centrality", graph, "--metric", "betweenness", "--top", "3"});
  ASSERT_EQ(c.code, cli::kOk) << c.err;
  EXPECT_EQ(c.out, to_csv(rank_by(compute_centrality(direct.graph), Metric::betweenness, 3)));
  EXPECT_EQ(run({"centrality", graph, "--metric", "pagerank"}).code, cli::kError);
}

TEST_F(CliTest, CompletenessExitCodes) {
  const auto star = path("star.graph"), split = path("split.graph");
  ASSERT_EQ(run({"ingest", synth("star"), "--out", star}).code, cli::kOk);
  ASSERT_EQ(run({"ingest", synth("isolated"), "--out", split}).code, cli::kOk);

  const auto ok = run({"inspect", "completeness", star});
  EXPECT_EQ(ok.code, cli::kOk);
  EXPECT_EQ(json::parse(ok.out)[0].at("is_complete"), true);

  const auto bad = run({"inspect", "completeness", split, "--databook", "DB-SPLIT"});
  EXPECT_EQ(bad.code, cli::kInspectionFailed);
  EXPECT_EQ(json::parse(bad.out)[0].at("isolated_documents"), json::array({"DOC-5", "DOC-6"}));

  const auto missing = run({"inspect", "completeness", star, "--databook", "DB-NOPE"});
  EXPECT_EQ(missing.code, cli::kError);
  EXPECT_EQ(json::parse(missing.err).at("code"), "UnknownDatabook");
}

TEST_F(CliTest, TraceAndConformance) {
  const auto split = path("split.graph");
  ASSERT_EQ(run({"ingest", synth("isolated"), "--out", split}).code, cli::kOk);
  EXPECT_EQ(run({"inspect", "trace", split, "--doc", "DOC-5"}).code, cli::kInspectionFailed);

  const auto star = path("star.graph");
  const auto star_loader = synth("star");
  ASSERT_EQ(run({"ingest", star_loader, "--out", star}).code, cli::kOk);
  const auto t = run({"inspect", "trace", star, "--doc", "DOC-1", "--max-depth", "2"});
  EXPECT_EQ(t.code, cli::kOk);
  EXPECT_EQ(json::parse(t.out).at("root"), "DOC-1");

  const auto rules = path("rules.json");
  std::ofstream(rules) << R"([{"rule_id": "yield", "doc_type": "purchase-order", "field_key": "YIELD_MPA",
    "check": {"type": "numeric_range", "min": 300, "max": 362}}])";
  const auto c = run({"inspect", "conformance", star_loader, "--rules", rules});
  EXPECT_EQ(c.code, cli::kInspectionFailed);
  EXPECT_EQ(json::parse(c.out).size(), 2u);
}

TEST_F(CliTest, BenchPrintsOneRowPerPattern) {
  const auto r = run({"bench", "-n", "1", "--concurrency", "1", "--json", path("bench.json")});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "pattern,runs,avg_ms,min_ms,max_ms");
  std::set<std::string> names;
  while (std::getline(lines, line)) names.insert(line.substr(0, line.find(',')));
  EXPECT_EQ(names.size(), kAllPatterns.size() + 1);
  for (auto p : kAllPatterns) EXPECT_TRUE(names.contains(std::string(pattern_name(p))));
  EXPECT_NE(r.err.find("audit 0"), std::string::npos) << r.err;
  EXPECT_EQ(json::parse(slurp(path("bench.json"))).at("audit_discrepancies"), 0);
}

TEST_F(CliTest, OcrEval) {
  const auto pairs = path("pairs.json");
  ASSERT_EQ(run({"synth", "ocr-easy", "--count", "500", "--out", pairs}).code, cli::kOk);
  const auto r = run({"ocr-eval", pairs});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  std::vector<OcrAccuracyLabel> labels;
  for (const auto& p : synth::ocr_corpus(synth::easy_profile(), 500, 7)) labels.push_back(classify_ocr_accuracy(p.ocr, p.truth));
  EXPECT_EQ(r.out, cli::ocr_summary(corpus_accuracy_summary(labels)));

  std::ofstream(path("empty.json")) << "[]";
  const auto e = run({"ocr-eval", path("empty.json")});
  EXPECT_EQ(e.code, cli::kError);
  EXPECT_EQ(json::parse(e.err).at("code"), "EmptyCorpus");
}

TEST_F(CliTest, Errors) {
  EXPECT_EQ(run({}).code, cli::kError);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kError);
  EXPECT_EQ(run({"ingest", path("missing.json"), "--out", path("x")}).code, cli::kError);
  std::ofstream(path("broken.json")) << "{\"documents\": [";
  const auto r = run({"ingest", path("broken.json"), "--out", path("x")});
  EXPECT_EQ(r.code, cli::kError);
  const auto j = json::parse(r.err);
  EXPECT_EQ(j.at("code"), "SyntaxError");
  EXPECT_EQ(j.at("status"), 400);
  std::ofstream(path("garbage.graph")) << "not a graph\n";
  EXPECT_EQ(json::parse(run({"centrality", path("garbage.graph")}).err).at("code"), "FormatError");
  EXPECT_EQ(run({"--help"}).code, cli::kOk);
}

TEST_F(CliTest, ShippedDataIsReproducible) {
  const fs::path data = GRAPHLED_DATA_DIR;
  EXPECT_EQ(slurp(data / "suppliers.json"), slurp(synth("suppliers")));
  EXPECT_EQ(slurp(data / "star.json"), slurp(synth("star")));
  EXPECT_EQ(slurp(data / "isolated.json"), slurp(synth("isolated")));
  const auto r = run({"disambiguate", (data / "suppliers.json").string(), "--config", (data / "filters.toml").string()});
  EXPECT_EQ(r.code, cli::kOk) << r.err;
  const auto rules = run({"inspect", "conformance", (data / "star.json").string(), "--rules", (data / "rules.json").string()});
  EXPECT_EQ(rules.code, cli::kOk) << rules.out;
}
