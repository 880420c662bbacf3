#pragma once

// Loader JSON ingestion: typed documents and databooks from the output of the
// upstream OCR / form-understanding stage.

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "graphled/error.hpp"

namespace graphled {

using json = nlohmann::json;

struct BoundingBox {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t width = 1;
  std::int64_t height = 1;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct FieldBlock {
  std::string key;
  std::string value;
  BoundingBox box;
  bool link_hint = false;

  friend bool operator==(const FieldBlock&, const FieldBlock&) = default;
};

enum class DocType {
  purchase_order,
  material_certificate,
  test_report,
  inspection_report,
  drawing,
  generic,
};

inline constexpr std::string_view doc_type_name(DocType t) noexcept {
  switch (t) {
    case DocType::purchase_order: return "purchase-order";
    case DocType::material_certificate: return "material-certificate";
    case DocType::test_report: return "test-report";
    case DocType::inspection_report: return "inspection-report";
    case DocType::drawing: return "drawing";
    case DocType::generic: return "generic";
  }
  return "generic";
}

// Unknown names map to generic: noisy classification must not abort ingestion.
inline DocType parse_doc_type(std::string_view name) noexcept {
  for (auto t : {DocType::purchase_order, DocType::material_certificate, DocType::test_report,
                 DocType::inspection_report, DocType::drawing}) {
    if (doc_type_name(t) == name) return t;
  }
  return DocType::generic;
}

struct Document {
  std::string doc_id;
  DocType doc_type = DocType::generic;
  std::vector<FieldBlock> blocks;
  std::string source_file;

  // First block with the given key, if any.
  const FieldBlock* field(std::string_view key) const {
    for (const auto& b : blocks) {
      if (b.key == key) return &b;
    }
    return nullptr;
  }

  friend bool operator==(const Document&, const Document&) = default;
};

struct Databook {
  std::string databook_id;
  std::vector<std::string> document_ids;
  std::vector<DocType> required_doc_types;

  friend bool operator==(const Databook&, const Databook&) = default;
};

struct DocumentSet {
  std::vector<Document> documents;
  std::vector<Databook> databooks;

  const Document* find_document(std::string_view doc_id) const {
    for (const auto& d : documents) {
      if (d.doc_id == doc_id) return &d;
    }
    return nullptr;
  }

  friend bool operator==(const DocumentSet&, const DocumentSet&) = default;
};

struct EntityMention {
  std::string doc_id;
  std::string key;
  std::string raw_value;

  friend bool operator==(const EntityMention&, const EntityMention&) = default;
  friend auto operator<=>(const EntityMention&, const EntityMention&) = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\f\v");
  return s.substr(first, last - first + 1);
}

inline const json& require(const json& obj, const char* field, const std::string& path) {
  if (!obj.is_object()) throw Error(Errc::schema, path + " must be an object");
  auto it = obj.find(field);
  if (it == obj.end()) throw Error(Errc::schema, "missing required field " + path + "/" + field);
  return *it;
}

inline std::string require_string(const json& obj, const char* field, const std::string& path) {
  const json& v = require(obj, field, path);
  if (!v.is_string()) throw Error(Errc::schema, path + "/" + field + " must be a string");
  return v.get<std::string>();
}

inline std::int64_t require_int(const json& obj, const char* field, const std::string& path) {
  const json& v = require(obj, field, path);
  if (!v.is_number_integer()) throw Error(Errc::schema, path + "/" + field + " must be an integer");
  return v.get<std::int64_t>();
}

inline const json& require_array(const json& obj, const char* field, const std::string& path) {
  const json& v = require(obj, field, path);
  if (!v.is_array()) throw Error(Errc::schema, path + "/" + field + " must be an array");
  return v;
}

}  // namespace detail

// Parses one loader JSON file. Throws Error with Errc::syntax, Errc::schema
// (message names the JSON path) or Errc::reference.
inline DocumentSet parse_loader_json(std::string_view bytes) {
  json root;
  try {
    root = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw Error(Errc::syntax, e.what());
  }

  DocumentSet ds;
  std::unordered_set<std::string> seen_ids;
  const json& docs = detail::require_array(root, "documents", "");
  ds.documents.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const std::string path = "/documents/" + std::to_string(i);
    const json& jd = docs[i];
    Document doc;
    doc.doc_id = detail::require_string(jd, "doc_id", path);
    if (detail::trim(doc.doc_id).empty()) throw Error(Errc::schema, path + "/doc_id must be non-empty");
    if (!seen_ids.insert(doc.doc_id).second) {
      throw Error(Errc::schema, path + "/doc_id duplicates \"" + doc.doc_id + "\"");
    }
    doc.doc_type = parse_doc_type(detail::require_string(jd, "doc_type", path));
    doc.source_file = detail::require_string(jd, "source_file", path);
    const json& blocks = detail::require_array(jd, "blocks", path);
    doc.blocks.reserve(blocks.size());
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      const std::string bpath = path + "/blocks/" + std::to_string(j);
      const json& jb = blocks[j];
      FieldBlock b;
      b.key = detail::require_string(jb, "key", bpath);
      if (detail::trim(b.key).empty()) throw Error(Errc::schema, bpath + "/key must be non-empty");
      b.value = detail::require_string(jb, "value", bpath);
      const json& jbox = detail::require(jb, "box", bpath);
      const std::string xpath = bpath + "/box";
      b.box.x = detail::require_int(jbox, "x", xpath);
      b.box.y = detail::require_int(jbox, "y", xpath);
      b.box.width = detail::require_int(jbox, "w", xpath);
      b.box.height = detail::require_int(jbox, "h", xpath);
      if (b.box.x < 0 || b.box.y < 0) throw Error(Errc::schema, xpath + " coordinates must be non-negative");
      if (b.box.width <= 0 || b.box.height <= 0) throw Error(Errc::schema, xpath + " must have positive w and h");
      if (auto it = jb.find("link"); it != jb.end()) {
        if (!it->is_boolean()) throw Error(Errc::schema, bpath + "/link must be a boolean");
        b.link_hint = it->get<bool>();
      }
      doc.blocks.push_back(std::move(b));
    }
    ds.documents.push_back(std::move(doc));
  }

  const json& books = detail::require_array(root, "databooks", "");
  ds.databooks.reserve(books.size());
  for (std::size_t i = 0; i < books.size(); ++i) {
    const std::string path = "/databooks/" + std::to_string(i);
    const json& jb = books[i];
    Databook book;
    book.databook_id = detail::require_string(jb, "databook_id", path);
    const json& ids = detail::require_array(jb, "document_ids", path);
    for (std::size_t j = 0; j < ids.size(); ++j) {
      if (!ids[j].is_string()) {
        throw Error(Errc::schema, path + "/document_ids/" + std::to_string(j) + " must be a string");
      }
      book.document_ids.push_back(ids[j].get<std::string>());
    }
    const json& types = detail::require_array(jb, "required_doc_types", path);
    for (std::size_t j = 0; j < types.size(); ++j) {
      if (!types[j].is_string()) {
        throw Error(Errc::schema, path + "/required_doc_types/" + std::to_string(j) + " must be a string");
      }
      book.required_doc_types.push_back(parse_doc_type(types[j].get<std::string>()));
    }
    for (const auto& id : book.document_ids) {
      if (!seen_ids.contains(id)) {
        throw Error(Errc::reference, "databook \"" + book.databook_id + "\" references unknown doc_id \"" + id + "\"");
      }
    }
    ds.databooks.push_back(std::move(book));
  }
  return ds;
}

inline json to_loader_json(const DocumentSet& ds) {
  json docs = json::array();
  for (const auto& d : ds.documents) {
    json blocks = json::array();
    for (const auto& b : d.blocks) {
      blocks.push_back({{"key", b.key},
                        {"value", b.value},
                        {"box", {{"x", b.box.x}, {"y", b.box.y}, {"w", b.box.width}, {"h", b.box.height}}},
                        {"link", b.link_hint}});
    }
    docs.push_back({{"doc_id", d.doc_id},
                    {"doc_type", doc_type_name(d.doc_type)},
                    {"source_file", d.source_file},
                    {"blocks", std::move(blocks)}});
  }
  json books = json::array();
  for (const auto& b : ds.databooks) {
    json types = json::array();
    for (auto t : b.required_doc_types) types.push_back(doc_type_name(t));
    books.push_back({{"databook_id", b.databook_id}, {"document_ids", b.document_ids}, {"required_doc_types", types}});
  }
  return {{"documents", std::move(docs)}, {"databooks", std::move(books)}};
}

inline std::string serialize_loader_json(const DocumentSet& ds, int indent = -1) {
  return to_loader_json(ds).dump(indent);
}

// Topic keys select which fields become graph topics. Empty means "every key
// that carries the link flag on at least one block".
struct TopicKeys {
  std::set<std::string> keys;

  std::set<std::string> resolve(const DocumentSet& ds) const {
    if (!keys.empty()) return keys;
    std::set<std::string> linked;
    for (const auto& d : ds.documents) {
      for (const auto& b : d.blocks) {
        if (b.link_hint) linked.insert(b.key);
      }
    }
    return linked;
  }
};

// One mention per block whose key is a topic key. Blank values are not
// references and are skipped.
inline std::vector<EntityMention> extract_entities(const DocumentSet& ds, const TopicKeys& topics = {}) {
  const auto keys = topics.resolve(ds);
  std::vector<EntityMention> out;
  for (const auto& d : ds.documents) {
    for (const auto& b : d.blocks) {
      if (!keys.contains(b.key)) continue;
      if (detail::trim(b.value).empty()) continue;
      out.push_back({d.doc_id, b.key, b.value});
    }
  }
  return out;
}

}  // namespace graphled
