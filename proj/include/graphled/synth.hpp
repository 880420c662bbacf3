#pragma once

// Seeded synthetic corpora: a supplier-variant replica for the disambiguation
// experiment, OCR-corrupted field pairs, and the star / isolated-document
// databook fixtures.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "graphled/error.hpp"
#include "graphled/ingest.hpp"
#include "graphled/inspection.hpp"

namespace graphled::synth {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

// ---------------------------------------------------------------------------
// Supplier replica

inline const std::vector<std::string>& supplier_names() {
  static const std::vector<std::string> names{
      "Tenaris Confab",        "Vallourec Tubos",         "Aker Solutions",      "Technip Energies",
      "Weatherford Industria BR", "Halliburton Servicos",  "Schlumberger Logelco", "Baker Hughes",
      "National Oilwell Varco", "Parker Hannifin",        "Emerson Process",     "Cameron Valves",
      "Flowserve Pumps",       "Sandvik Materials",       "Usiminas Siderurgica MG", "Gerdau Acos Longos",
      "Voestalpine Tubulars"};
  return names;
}

inline const std::map<std::string, std::string>& supplier_acronyms() {
  static const std::map<std::string, std::string> acronyms{{"National Oilwell Varco", "NOV"}};
  return acronyms;
}

namespace detail {

inline std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline std::string join(const std::vector<std::string>& parts, char sep, std::size_t from = 0, std::size_t to = SIZE_MAX) {
  std::string out;
  for (std::size_t i = from; i < std::min(to, parts.size()); ++i) {
    if (!out.empty()) out += sep;
    out += parts[i];
  }
  return out;
}

inline std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Character pairs OCR engines commonly confuse.
inline const std::map<char, char>& confusions() {
  static const std::map<char, char> m{{'o', '0'}, {'l', '1'}, {'i', 'l'}, {'e', 'c'}, {'s', '5'}, {'b', 'h'},
                                      {'n', 'm'}, {'a', 'o'}, {'g', 'q'}, {'t', 'f'}, {'r', 'n'}};
  return m;
}

}  // namespace detail

// The "Last-Rest" swap ("A-supplier" for "supplier A"), offered only when the
// moved token is short relative to the whole name.
inline std::optional<std::string> swapped_variant(const std::string& name) {
  const auto t = detail::tokens(name);
  if (t.size() < 2 || t.back().size() * 5 > name.size()) return std::nullopt;
  return t.back() + "-" + detail::join(t, '-', 0, t.size() - 1);
}

// Every surface form the generator may emit for one supplier, canonical first.
inline std::vector<std::string> supplier_variant_pool(const std::string& name) {
  const auto t = detail::tokens(name);
  const std::string hyph = detail::join(t, '-');
  std::vector<std::string> pool{name,
                                detail::upper(name),
                                detail::lower(name),
                                hyph,
                                name + " Inc",
                                hyph + ".inc",
                                name + " Ltda.",
                                name + " S.A.",
                                "Group " + name,
                                "group-" + hyph};
  for (std::size_t i = 0; i < name.size(); ++i) {
    auto it = detail::confusions().find(name[i]);
    if (it == detail::confusions().end()) continue;
    std::string typo = name;
    typo[i] = it->second;
    pool.push_back(std::move(typo));
  }
  return pool;
}

struct SupplierCorpusOptions {
  std::uint64_t seed = 2024;
  std::size_t mentions = 226;
  std::size_t distinct_variants = 128;
  std::size_t canonical_extra = 4;   // extra mentions of each canonical name
  std::size_t variant_extra_max = 2;  // extra mentions per non-canonical variant
};

struct SupplierCorpus {
  DocumentSet documents;
  std::vector<std::string> mentions;               // raw values, document order
  std::map<std::string, std::string> truth;        // raw variant -> supplier
  std::size_t ground_truth = 0;                    // distinct suppliers
};

inline constexpr std::string_view kSupplierKey = "SUPPLIER";

// One purchase order per mention with a linked SUPPLIER field; one databook
// per true supplier collecting its orders.
inline SupplierCorpus supplier_corpus(const SupplierCorpusOptions& opt = {}) {
  const auto& names = supplier_names();
  const std::size_t k = names.size();
  if (opt.distinct_variants < k) throw Error(Errc::invalid_argument, "fewer variants than suppliers");
  Rng rng(opt.seed);

  std::vector<std::size_t> quota(k, opt.distinct_variants / k);
  {
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i < opt.distinct_variants % k; ++i) ++quota[order[i]];
  }

  SupplierCorpus corpus;
  corpus.ground_truth = k;
  std::set<std::string> used;
  std::vector<std::vector<std::string>> variants(k);
  for (std::size_t s = 0; s < k; ++s) {
    const std::string& name = names[s];
    std::vector<std::string> required{name};
    if (auto it = supplier_acronyms().find(name); it != supplier_acronyms().end()) required.push_back(it->second);
    if (auto sw = swapped_variant(name)) required.push_back(*sw);
    auto pool = supplier_variant_pool(name);
    pool.erase(pool.begin());
    std::shuffle(pool.begin(), pool.end(), rng);
    for (const auto& v : required) {
      if (used.insert(v).second) variants[s].push_back(v);
    }
    for (const auto& v : pool) {
      if (variants[s].size() >= quota[s]) break;
      if (used.insert(v).second) variants[s].push_back(v);
    }
    if (variants[s].size() != quota[s]) throw Error(Errc::invalid_argument, "variant pool too small for " + name);
    for (const auto& v : variants[s]) corpus.truth[v] = name;
  }

  std::vector<std::string> mentions;
  std::vector<std::string> extendable;
  for (std::size_t s = 0; s < k; ++s) {
    for (const auto& v : variants[s]) mentions.push_back(v);
    mentions.insert(mentions.end(), opt.canonical_extra, names[s]);
    for (std::size_t i = 1; i < variants[s].size(); ++i) {
      extendable.insert(extendable.end(), opt.variant_extra_max, variants[s][i]);
    }
  }
  if (mentions.size() > opt.mentions) throw Error(Errc::invalid_argument, "mention budget too small");
  const std::size_t remaining = opt.mentions - mentions.size();
  if (remaining > extendable.size()) throw Error(Errc::invalid_argument, "mention budget too large");
  std::shuffle(extendable.begin(), extendable.end(), rng);
  mentions.insert(mentions.end(), extendable.begin(), extendable.begin() + static_cast<std::ptrdiff_t>(remaining));
  std::shuffle(mentions.begin(), mentions.end(), rng);

  std::map<std::string, Databook> books;
  for (std::size_t i = 0; i < mentions.size(); ++i) {
    Document d;
    d.doc_id = "PO-" + std::to_string(1000 + i);
    d.doc_type = DocType::purchase_order;
    d.source_file = "po_" + std::to_string(1000 + i) + ".pdf";
    d.blocks.push_back({std::string(kSupplierKey), mentions[i], {40, 60, 320, 24}, true});
    d.blocks.push_back({"PO_NUMBER", std::to_string(450000 + pick(rng, 50000)), {40, 20, 160, 24}, false});
    const std::string& supplier = corpus.truth.at(mentions[i]);
    auto& book = books[supplier];
    if (book.databook_id.empty()) {
      book.databook_id = "DB-" + detail::join(detail::tokens(supplier), '-');
      book.required_doc_types = {DocType::purchase_order};
    }
    book.document_ids.push_back(d.doc_id);
    corpus.documents.documents.push_back(std::move(d));
  }
  for (auto& [name, book] : books) corpus.documents.databooks.push_back(std::move(book));
  corpus.mentions = std::move(mentions);
  return corpus;
}

// ---------------------------------------------------------------------------
// OCR corruption

struct OcrProfile {
  double clean = 0.859;
  double light = 0.1272;
  double scramble = 0.0158;
};

inline OcrProfile easy_profile() { return {0.859, 0.1272, 0.0158}; }
inline OcrProfile difficult_profile() { return {0.2567, 0.2432, 0.5001}; }

// Plausible databook field values: heat numbers, standards, dimensions, lots.
inline std::string random_field_value(Rng& rng) {
  auto digits = [&](std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += static_cast<char>('0' + pick(rng, 10));
    return s;
  };
  static const std::vector<std::string> grades{"ASTM A106 GR B", "API 5L X65 PSL2", "ASTM A312 TP316L",
                                               "ASTM A182 F51",  "ISO 3183 L450",  "ASME SA516 GR 70"};
  static const std::vector<std::string> words{"flange", "valve", "seamless pipe", "elbow", "reducer", "gasket"};
  switch (pick(rng, 6)) {
    case 0: return "HT-" + digits(6);
    case 1: return grades[pick(rng, grades.size())];
    case 2: return digits(3) + "," + digits(1) + " mm";
    case 3: return "OS_LOTE " + digits(5);
    case 4: return words[pick(rng, words.size())] + " " + digits(2) + " in";
    default: return supplier_names()[pick(rng, supplier_names().size())];
  }
}

// One to two confusable substitutions at alphanumeric positions.
inline std::string lightly_corrupt(const std::string& truth, Rng& rng) {
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (std::isalnum(static_cast<unsigned char>(truth[i]))) positions.push_back(i);
  }
  if (positions.empty()) return truth + "x";
  std::shuffle(positions.begin(), positions.end(), rng);
  const std::size_t subs = std::min<std::size_t>(positions.size(), 1 + pick(rng, 2));
  std::string out = truth;
  static const std::string alnum = "abcdefghijklmnopqrstuvwxyz0123456789";
  for (std::size_t p = 0; p < subs; ++p) {
    const char orig = static_cast<char>(std::tolower(static_cast<unsigned char>(out[positions[p]])));
    auto it = detail::confusions().find(orig);
    char repl = it != detail::confusions().end() ? it->second : alnum[pick(rng, alnum.size())];
    while (repl == orig) repl = alnum[pick(rng, alnum.size())];
    out[positions[p]] = repl;
  }
  return out;
}

// Same length, drawn only from characters absent from the truth.
inline std::string scramble(const std::string& truth, Rng& rng) {
  static const std::string alnum = "abcdefghijklmnopqrstuvwxyz0123456789";
  std::string folded = detail::lower(truth);
  std::string pool;
  for (char c : alnum) {
    if (folded.find(c) == std::string::npos) pool += c;
  }
  std::string out(std::max<std::size_t>(truth.size(), 1), 'x');
  for (auto& c : out) c = pool[pick(rng, pool.size())];
  return out;
}

inline std::vector<OcrPair> ocr_corpus(const OcrProfile& profile, std::size_t fields, std::uint64_t seed) {
  Rng rng(seed);
  std::discrete_distribution<int> kind({profile.clean, profile.light, profile.scramble});
  std::vector<OcrPair> out;
  out.reserve(fields);
  for (std::size_t i = 0; i < fields; ++i) {
    std::string truth = random_field_value(rng);
    switch (kind(rng)) {
      case 0: out.push_back({truth, truth}); break;
      case 1: out.push_back({lightly_corrupt(truth, rng), truth}); break;
      default: out.push_back({scramble(truth, rng), truth}); break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Databook fixtures

inline std::vector<DocType> fixture_required_types() {
  return {DocType::purchase_order, DocType::material_certificate, DocType::test_report, DocType::inspection_report};
}

inline Document fixture_document(std::string id, DocType type, std::vector<FieldBlock> blocks) {
  Document d;
  d.doc_id = std::move(id);
  d.doc_type = type;
  d.source_file = d.doc_id + ".pdf";
  d.blocks = std::move(blocks);
  return d;
}

// `documents` documents that all reference the same batch topic, grouped in
// one databook whose required types are all present.
inline DocumentSet star_fixture(std::size_t documents = 5) {
  const auto types = fixture_required_types();
  DocumentSet ds;
  Databook book{"DB-STAR", {}, types};
  for (std::size_t i = 0; i < documents; ++i) {
    const std::string id = "DOC-" + std::to_string(i + 1);
    ds.documents.push_back(fixture_document(id, types[i % types.size()],
                                            {{"OS_LOTE", "L-40213", {50, 40, 200, 20}, true},
                                             {"YIELD_MPA", std::to_string(360 + 5 * i), {50, 80, 120, 20}, false}}));
    book.document_ids.push_back(id);
  }
  ds.databooks.push_back(std::move(book));
  return ds;
}

// Four documents linked through a shared batch plus two documents whose only
// topics are their own drawing numbers.
inline DocumentSet isolated_fixture() {
  const auto types = fixture_required_types();
  DocumentSet ds;
  Databook book{"DB-SPLIT", {}, types};
  for (std::size_t i = 0; i < 4; ++i) {
    const std::string id = "DOC-" + std::to_string(i + 1);
    ds.documents.push_back(fixture_document(id, types[i], {{"OS_LOTE", "L-40213", {50, 40, 200, 20}, true}}));
    book.document_ids.push_back(id);
  }
  ds.documents.push_back(fixture_document("DOC-5", DocType::drawing, {{"DRAWING_NO", "DWG-A17", {30, 30, 150, 20}, true}}));
  ds.documents.push_back(fixture_document("DOC-6", DocType::drawing, {{"DRAWING_NO", "QX-90412", {30, 30, 150, 20}, true}}));
  book.document_ids.push_back("DOC-5");
  book.document_ids.push_back("DOC-6");
  ds.databooks.push_back(std::move(book));
  return ds;
}

}  // namespace graphled::synth
