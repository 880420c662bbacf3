#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace graphled {

enum class Errc {
  syntax,
  schema,
  reference,
  empty_after_normalize,
  division_domain,
  unknown_node,
  unknown_edge,
  ambiguous_merge,
  io,
  format,
  no_edges,
  unknown_databook,
  empty_truth,
  empty_corpus,
  depth_zero,
  insufficient_nodes,
  empty_graph,
  invalid_argument,
};

constexpr std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::syntax: return "SyntaxError";
    case Errc::schema: return "SchemaError";
    case Errc::reference: return "ReferenceError";
    case Errc::empty_after_normalize: return "EmptyAfterNormalize";
    case Errc::division_domain: return "DivisionDomain";
    case Errc::unknown_node: return "UnknownNode";
    case Errc::unknown_edge: return "UnknownEdge";
    case Errc::ambiguous_merge: return "AmbiguousMerge";
    case Errc::io: return "IoError";
    case Errc::format: return "FormatError";
    case Errc::no_edges: return "NoEdges";
    case Errc::unknown_databook: return "UnknownDatabook";
    case Errc::empty_truth: return "EmptyTruth";
    case Errc::empty_corpus: return "EmptyCorpus";
    case Errc::depth_zero: return "DepthZero";
    case Errc::insufficient_nodes: return "InsufficientNodes";
    case Errc::empty_graph: return "EmptyGraph";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "Error";
}

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return errc_name(code_); }
  // Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace graphled
