#include <gtest/gtest.h>

#include "graphled/graph_builder.hpp"
#include "graphled/inspection.hpp"
#include "graphled/synth.hpp"

using namespace graphled;

namespace {

PropertyGraph graph_of(const DocumentSet& ds) { return run_pipeline(ds).graph; }

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return Errc::io;
}

ConformanceRule rule(std::string id, DocType type, std::string key, RuleCheck check) {
  return {std::move(id), type, std::move(key), std::move(check), {}};
}

}  // namespace

TEST(Completeness, StarFixtureIsComplete) {
  const auto g = graph_of(synth::star_fixture());
  const auto r = check_completeness(g, "DB-STAR");
  EXPECT_TRUE(r.is_complete);
  EXPECT_TRUE(r.connected);
  EXPECT_TRUE(r.missing_doc_types.empty());
  EXPECT_TRUE(r.isolated_documents.empty());
  EXPECT_EQ(r.document_count, 5u);
}

TEST(Completeness, IsolatedDocumentsBreakConnectivity) {
  const auto g = graph_of(synth::isolated_fixture());
  const auto r = check_completeness(g, "DB-SPLIT");
  EXPECT_FALSE(r.is_complete);
  EXPECT_FALSE(r.connected);
  EXPECT_TRUE(r.missing_doc_types.empty());
  EXPECT_EQ(r.isolated_documents, (std::vector<std::string>{"DOC-5", "DOC-6"}));
}

TEST(Completeness, MissingTypesAreReported) {
  auto ds = synth::star_fixture(2);
  const auto g = graph_of(ds);
  const auto r = check_completeness(g, "DB-STAR");
  EXPECT_FALSE(r.is_complete);
  EXPECT_TRUE(r.connected);
  EXPECT_EQ(r.missing_doc_types, (std::vector<DocType>{DocType::test_report, DocType::inspection_report}));
  const auto relaxed = check_completeness(g, "DB-STAR", std::vector<DocType>{DocType::purchase_order});
  EXPECT_TRUE(relaxed.is_complete);
}

TEST(Completeness, SingleDocumentIsConnected) {
  const auto g = graph_of(synth::star_fixture(1));
  const auto r = check_completeness(g, "DB-STAR", std::vector<DocType>{});
  EXPECT_TRUE(r.connected);
  EXPECT_TRUE(r.is_complete);
  EXPECT_TRUE(r.isolated_documents.empty());
}

TEST(Completeness, UnknownDatabook) {
  const auto g = graph_of(synth::star_fixture());
  EXPECT_EQ(code_of([&] { check_completeness(g, "DB-NOPE"); }), Errc::unknown_databook);
  const auto j = to_json(check_completeness(g, "DB-STAR"));
  EXPECT_EQ(j.at("databook_id"), "DB-STAR");
  EXPECT_EQ(j.at("is_complete"), true);
}

TEST(Conformance, ParseDecimal) {
  EXPECT_EQ(parse_decimal("250"), 250.0);
  EXPECT_EQ(parse_decimal(" 12,5 "), 12.5);
  EXPECT_EQ(parse_decimal("355 MPa", "MPa"), 355.0);
  EXPECT_EQ(parse_decimal("355mpa", "MPa"), 355.0);
  EXPECT_EQ(parse_decimal("-3.25"), -3.25);
  EXPECT_FALSE(parse_decimal("25O"));
  EXPECT_FALSE(parse_decimal("1.2.3"));
  EXPECT_FALSE(parse_decimal(""));
  EXPECT_FALSE(parse_decimal("MPa", "MPa"));
}

TEST(Conformance, Outcomes) {
  DocumentSet ds;
  ds.documents.push_back(synth::fixture_document(
      "MC-1", DocType::material_certificate,
      {{"YIELD", "360 MPa", {0, 0, 1, 1}, false}, {"GRADE", "X65", {0, 0, 1, 1}, false}}));
  ds.documents.push_back(synth::fixture_document("MC-2", DocType::material_certificate,
                                                 {{"YIELD", "25O", {0, 0, 1, 1}, false}}));
  ds.documents.push_back(synth::fixture_document("MC-3", DocType::material_certificate,
                                                 {{"YIELD", "900", {0, 0, 1, 1}, false}}));
  ds.documents.push_back(synth::fixture_document("PO-1", DocType::purchase_order, {}));
  const std::vector<ConformanceRule> rules{
      rule("yield", DocType::material_certificate, "YIELD", NumericRange{245, 450, "MPa"}),
      rule("grade", DocType::material_certificate, "GRADE", ValueInSet{{"X52", "X65"}}),
      rule("grade-re", DocType::material_certificate, "GRADE", RegexMatch{"X[0-9]{2}"}),
      rule("po-number", DocType::purchase_order, "PO_NUMBER", RequiredPresent{}),
  };
  const auto results = check_conformance(ds, rules);
  auto outcome = [&](const std::string& doc, const std::string& id) {
    for (const auto& r : results) {
      if (r.doc_id == doc && r.rule_id == id) return r;
    }
    ADD_FAILURE() << doc << " " << id;
    return ConformanceResult{};
  };
  EXPECT_EQ(results.size(), 3u + 3u + 3u + 1u);
  EXPECT_EQ(outcome("MC-1", "yield").outcome, Outcome::pass);
  EXPECT_EQ(outcome("MC-2", "yield").outcome, Outcome::fail);
  EXPECT_EQ(outcome("MC-2", "yield").detail, "unparseable");
  EXPECT_EQ(outcome("MC-3", "yield").outcome, Outcome::fail);
  EXPECT_EQ(outcome("MC-1", "grade").outcome, Outcome::pass);
  EXPECT_EQ(outcome("MC-2", "grade").outcome, Outcome::inapplicable);
  EXPECT_EQ(outcome("MC-1", "grade-re").outcome, Outcome::pass);
  EXPECT_EQ(outcome("PO-1", "po-number").outcome, Outcome::fail);
}

TEST(Conformance, RulesJson) {
  const auto j = json::parse(R"([
    {"rule_id": "r1", "doc_type": "test-report", "field_key": "HARDNESS",
     "check": {"type": "numeric_range", "min": 0, "max": 22, "units": "HRC"}, "standard_ref": "NACE MR0175"},
    {"rule_id": "r2", "doc_type": "drawing", "field_key": "REV", "check": {"type": "regex_match", "pattern": "[A-Z]"}},
    {"rule_id": "r3", "doc_type": "drawing", "field_key": "REV", "check": {"type": "required_present"}},
    {"rule_id": "r4", "doc_type": "drawing", "field_key": "REV", "check": {"type": "value_in_set", "values": ["A"]}}
  ])");
  const auto rules = rules_from_json(j);
  ASSERT_EQ(rules.size(), 4u);
  json back = json::array();
  for (const auto& r : rules) back.push_back(to_json(r));
  EXPECT_EQ(rules_from_json(back).size(), 4u);
  EXPECT_EQ(back[0].at("check").at("units"), "HRC");

  EXPECT_EQ(code_of([] { rules_from_json(json::parse(R"([{"rule_id": "x", "doc_type": "drawing", "field_key": "K",
      "check": {"type": "numeric_range", "min": 5, "max": 1}}])")); }),
            Errc::schema);
  EXPECT_EQ(code_of([] { rules_from_json(json::parse(R"([{"rule_id": "x", "doc_type": "drawing", "field_key": "K",
      "check": {"type": "regex_match", "pattern": "("}}])")); }),
            Errc::schema);
  EXPECT_EQ(code_of([] { rules_from_json(json::parse(R"([{"rule_id": "x", "doc_type": "drawing", "field_key": "K",
      "check": {"type": "bogus"}}])")); }),
            Errc::schema);
  EXPECT_EQ(code_of([] { rules_from_json(json::parse(R"({})")); }), Errc::schema);
}

TEST(Trace, StarReachesEveryDocument) {
  const auto g = graph_of(synth::star_fixture());
  const auto r = trace(g, "DOC-3");
  auto docs = r.visited_documents();
  std::sort(docs.begin(), docs.end());
  EXPECT_EQ(docs, (std::vector<std::string>{"DOC-1", "DOC-2", "DOC-3", "DOC-4", "DOC-5"}));
  EXPECT_TRUE(r.broken_links.empty());
  EXPECT_TRUE(r.flagged_databooks.empty());
  EXPECT_TRUE(r.complete_trace);
  EXPECT_EQ(r.visited.front().name, "DOC-3");
  EXPECT_FALSE(r.visited.front().via);
  for (const auto& s : r.visited) EXPECT_LE(s.depth, 1u);
}

TEST(Trace, IsolatedDocumentHasBrokenLink) {
  const auto g = graph_of(synth::isolated_fixture());
  const auto r = trace(g, "DOC-5");
  EXPECT_EQ(r.visited_documents(), (std::vector<std::string>{"DOC-5"}));
  ASSERT_EQ(r.broken_links.size(), 1u);
  EXPECT_EQ(r.broken_links[0].value, "DWG-A17");
  EXPECT_EQ(r.flagged_databooks, (std::vector<std::string>{"DB-SPLIT"}));
  EXPECT_FALSE(r.complete_trace);
  const auto j = to_json(r);
  EXPECT_EQ(j.at("complete_trace"), false);
}

TEST(Trace, DepthLimit) {
  // Chain DOC-1 -K1- DOC-2 -K2- DOC-3 -K3- DOC-4.
  DocumentSet ds;
  for (int i = 1; i <= 4; ++i) {
    std::vector<FieldBlock> blocks;
    if (i > 1) blocks.push_back({"K" + std::to_string(i - 1), "chain-" + std::to_string(i - 1), {0, 0, 1, 1}, true});
    if (i < 4) blocks.push_back({"K" + std::to_string(i), "chain-" + std::to_string(i), {0, 0, 1, 1}, true});
    ds.documents.push_back(synth::fixture_document("DOC-" + std::to_string(i), DocType::generic, blocks));
  }
  const auto g = graph_of(ds);
  EXPECT_EQ(trace(g, "DOC-1", 1).visited_documents(), (std::vector<std::string>{"DOC-1", "DOC-2"}));
  EXPECT_EQ(trace(g, "DOC-1", 2).visited_documents().size(), 3u);
  EXPECT_EQ(trace(g, "DOC-1").visited_documents().size(), 4u);
  EXPECT_EQ(code_of([&] { trace(g, "DOC-1", 0); }), Errc::invalid_argument);
  EXPECT_EQ(code_of([&] { trace(g, "DOC-9"); }), Errc::unknown_node);
}

TEST(OcrAccuracy, Classification) {
  EXPECT_EQ(classify_ocr_accuracy("Tenaris Confab", "TENARIS-CONFAB").cls, OcrClass::total_hit);
  const auto partial = classify_ocr_accuracy("tenar1s confab", "tenaris confab");
  EXPECT_EQ(partial.cls, OcrClass::partial_hit);
  EXPECT_NEAR(partial.similarity, 13.0 / 14.0, 1e-12);
  EXPECT_EQ(classify_ocr_accuracy("zzzz", "tenaris").cls, OcrClass::inconsistency);
  EXPECT_EQ(classify_ocr_accuracy("", "tenaris").cls, OcrClass::inconsistency);
  // Stopwords count for OCR comparison.
  EXPECT_NE(classify_ocr_accuracy("supplier of pipes", "supplier pipes").cls, OcrClass::total_hit);
}

TEST(OcrAccuracy, Errors) {
  EXPECT_EQ(code_of([] { classify_ocr_accuracy("abc", " -- "); }), Errc::empty_truth);
  EXPECT_EQ(code_of([] { corpus_accuracy_summary({}); }), Errc::empty_corpus);
  const auto s = corpus_accuracy_summary({{OcrClass::total_hit, 1.0}, {OcrClass::partial_hit, 0.7},
                                          {OcrClass::partial_hit, 0.6}, {OcrClass::inconsistency, 0.1}});
  EXPECT_DOUBLE_EQ(s.total_hit_pct, 25.0);
  EXPECT_DOUBLE_EQ(s.partial_pct, 50.0);
  EXPECT_DOUBLE_EQ(s.inconsistency_pct, 25.0);
  EXPECT_EQ(s.fields, 4u);
}

TEST(OcrAccuracy, SyntheticProfilesReproduceReportedMix) {
  struct Expect {
    synth::OcrProfile profile;
    double hit, partial, inconsistent;
  };
  const Expect cases[] = {{synth::easy_profile(), 85.90, 12.72, 1.58},
                          {synth::difficult_profile(), 25.67, 24.32, 50.01}};
  for (const auto& c : cases) {
    std::vector<OcrAccuracyLabel> labels;
    for (const auto& p : synth::ocr_corpus(c.profile, 2000, 7)) labels.push_back(classify_ocr_accuracy(p.ocr, p.truth));
    const auto s = corpus_accuracy_summary(labels);
    EXPECT_NEAR(s.total_hit_pct, c.hit, 3.0);
    EXPECT_NEAR(s.partial_pct, c.partial, 3.0);
    EXPECT_NEAR(s.inconsistency_pct, c.inconsistent, 3.0);
  }
}

TEST(OcrAccuracy, PairsJson) {
  const auto pairs = ocr_pairs_from_json(json::parse(R"([{"ocr": "a", "truth": "b"}])"));
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(to_json(pairs[0]).at("truth"), "b");
  EXPECT_EQ(code_of([] { ocr_pairs_from_json(json::parse(R"([{"ocr": "a"}])")); }), Errc::schema);
}
