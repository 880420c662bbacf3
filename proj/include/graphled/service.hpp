#pragma once

// JSON-over-HTTP front end. One active graph per instance; every mutation
// builds a new immutable snapshot and swaps it in, so readers always see a
// whole graph.

#include <charconv>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include <httplib.h>
#include <json.hpp>

#include "graphled/centrality.hpp"
#include "graphled/error.hpp"
#include "graphled/graph_builder.hpp"
#include "graphled/inspection.hpp"
#include "graphled/workload.hpp"

namespace graphled {

struct ApiError {
  int status = 500;
  std::string code;
  std::string message;
};

inline json to_json(const ApiError& e) { return {{"status", e.status}, {"code", e.code}, {"message", e.message}}; }

inline int http_status(Errc c) noexcept {
  switch (c) {
    case Errc::syntax:
    case Errc::schema:
    case Errc::reference:
    case Errc::invalid_argument:
    case Errc::depth_zero:
      return 400;
    case Errc::unknown_node:
    case Errc::unknown_edge:
    case Errc::unknown_databook:
      return 404;
    case Errc::ambiguous_merge:
      return 409;
    default:
      return 500;
  }
}

inline ApiError api_error(const Error& e) { return {http_status(e.code()), std::string(e.name()), e.detail()}; }

struct ListenAddress {
  std::string host = "127.0.0.1";
  int port = 8098;
};

inline ListenAddress parse_listen(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size()) {
    throw Error(Errc::invalid_argument, "listen address must be HOST:PORT, got \"" + std::string(text) + "\"");
  }
  ListenAddress a;
  a.host = std::string(text.substr(0, colon));
  const std::string port(text.substr(colon + 1));
  char* end = nullptr;
  const long p = std::strtol(port.c_str(), &end, 10);
  if (*end != '\0' || p < 0 || p > 65535) throw Error(Errc::invalid_argument, "bad port \"" + port + "\"");
  a.port = static_cast<int>(p);
  return a;
}

// --listen flag, then GRAPHLED_LISTEN, then 127.0.0.1:8098.
inline ListenAddress resolve_listen(const std::optional<std::string>& flag) {
  if (flag) return parse_listen(*flag);
  if (const char* env = std::getenv("GRAPHLED_LISTEN"); env && *env) return parse_listen(env);
  return {};
}

struct ServiceOptions {
  std::string cors_origin = "*";
  FilterConfig filters;
  TopicKeys topics;
  unsigned workers = 1;
};

class Service {
 public:
  struct State {
    DocumentSet documents;
    PropertyGraph graph{default_indexed_keys()};
  };

  explicit Service(ServiceOptions opts = {}) : opts_(std::move(opts)), state_(std::make_shared<const State>()) {
    opts_.filters.validate();
    routes();
  }

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  ~Service() { stop(); }

  std::shared_ptr<const State> snapshot() const {
    std::lock_guard lock(state_mu_);
    return state_;
  }

  httplib::Server& server() { return server_; }

  // Binds and serves until stop(); returns false if the bind fails.
  bool listen(const ListenAddress& addr) { return server_.listen(addr.host, addr.port); }

  // Binds to an ephemeral port on host and returns it (for tests).
  int bind_any_port(const std::string& host = "127.0.0.1") { return server_.bind_to_any_port(host); }
  bool listen_after_bind() { return server_.listen_after_bind(); }

  void stop() { server_.stop(); }

 private:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  static void send(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static void send_error(httplib::Response& res, const ApiError& e) { send(res, e.status, to_json(e)); }

  static json parse_body(const httplib::Request& req) {
    try {
      return json::parse(req.body);
    } catch (const json::parse_error& e) {
      throw Error(Errc::syntax, e.what());
    }
  }

  static Handler guarded(Handler h) {
    return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      try {
        h(req, res);
      } catch (const Error& e) {
        send_error(res, api_error(e));
      } catch (const json::exception& e) {
        send_error(res, {400, "SchemaError", e.what()});
      } catch (const std::exception& e) {
        send_error(res, {500, "InternalError", e.what()});
      }
    };
  }

  void publish(std::shared_ptr<const State> next) {
    std::lock_guard lock(state_mu_);
    state_ = std::move(next);
  }

  void routes() {
    server_.set_default_headers({{"Access-Control-Allow-Origin", opts_.cors_origin},
                                 {"Access-Control-Allow-Headers", "Content-Type"},
                                 {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"}});
    server_.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    server_.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (!res.body.empty()) return;
      send_error(res, {res.status, res.status == 404 ? "NotFound" : "HttpError", req.method + " " + req.path});
    });

    server_.Post("/v1/ingest", guarded([this](const httplib::Request& req, httplib::Response& res) { ingest(req, res); }));

    server_.Get("/v1/graph/summary", guarded([this](const httplib::Request&, httplib::Response& res) {
      auto s = snapshot();
      json labels = json::object();
      for (const auto& [label, count] : s->graph.label_histogram()) {
        if (count > 0) labels[std::string(label_name(label))] = count;
      }
      send(res, 200, {{"node_count", s->graph.node_count()}, {"edge_count", s->graph.edge_count()}, {"labels", labels}});
    }));

    server_.Post("/v1/query/traverse", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto query = query_from_json(parse_body(req));
      auto s = snapshot();
      json triples = json::array();
      for (const auto& t : s->graph.traverse(query)) triples.push_back(to_json(t));
      send(res, 200, {{"triples", std::move(triples)}});
    }));

    server_.Get("/v1/centrality", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const std::string name = req.has_param("metric") ? req.get_param_value("metric") : "relevance";
      const auto metric = parse_metric(name);
      if (!metric) throw Error(Errc::schema, "unknown metric \"" + name + "\"");
      std::size_t top = 0;
      if (req.has_param("top")) top = parse_count(req.get_param_value("top"), "top");
      auto s = snapshot();
      CentralityOptions co;
      co.workers = opts_.workers;
      const auto table = compute_centrality(s->graph, co);
      json rows = json::array();
      for (const auto& r : rank_by(table, *metric, top)) rows.push_back(to_json(r));
      send(res, 200, {{"metric", name}, {"eigenvector_converged", table.eigenvector_converged}, {"rows", std::move(rows)}});
    }));

    server_.Get(R"(/v1/inspect/completeness/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto s = snapshot();
      send(res, 200, to_json(check_completeness(s->graph, req.matches[1].str())));
    }));

    server_.Post("/v1/inspect/conformance", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      const auto rules = rules_from_json(body.is_object() && body.contains("rules") ? body.at("rules") : body);
      auto s = snapshot();
      json results = json::array();
      bool all_pass = true;
      for (const auto& r : check_conformance(s->documents, rules)) {
        all_pass = all_pass && r.outcome != Outcome::fail;
        results.push_back(to_json(r));
      }
      send(res, 200, {{"all_pass", all_pass}, {"results", std::move(results)}});
    }));

    server_.Get(R"(/v1/inspect/trace/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      std::size_t depth = kDefaultTraceDepth;
      if (req.has_param("max_depth")) depth = parse_count(req.get_param_value("max_depth"), "max_depth");
      auto s = snapshot();
      send(res, 200, to_json(trace(s->graph, req.matches[1].str(), depth)));
    }));

    server_.Delete(R"(/v1/graph/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      remove_databook(req.matches[1].str(), res);
    }));

    server_.Post("/v1/benchmark", guarded([](const httplib::Request& req, httplib::Response& res) {
      const auto spec = workload_spec_from_json(parse_body(req));
      send(res, 200, to_json(run_benchmark(spec)));
    }));

    server_.Get("/v1/graph/slots", guarded([this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard lock(write_mu_);
      json names = json::array();
      for (const auto& [name, st] : slots_) names.push_back(name);
      send(res, 200, {{"slots", std::move(names)}});
    }));

    server_.Post(R"(/v1/graph/slots/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(write_mu_);
      auto s = snapshot();
      slots_[req.matches[1].str()] = s;
      send(res, 201, {{"slot", req.matches[1].str()}, {"node_count", s->graph.node_count()}});
    }));

    server_.Post(R"(/v1/graph/slots/([^/]+)/load)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(write_mu_);
      auto it = slots_.find(req.matches[1].str());
      if (it == slots_.end()) throw Error(Errc::unknown_node, "no saved slot \"" + req.matches[1].str() + "\"");
      publish(it->second);
      send(res, 200, {{"slot", it->first}, {"node_count", it->second->graph.node_count()}});
    }));
  }

  static std::size_t parse_count(const std::string& v, const char* name) {
    std::size_t n = 0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
    if (v.empty() || ec != std::errc{} || end != v.data() + v.size())
      throw Error(Errc::schema, std::string(name) + " must be a non-negative integer");
    return n;
  }

  void ingest(const httplib::Request& req, httplib::Response& res) {
    const DocumentSet incoming = parse_loader_json(req.body);
    std::lock_guard lock(write_mu_);
    auto current = snapshot();
    auto next = std::make_shared<State>();
    next->documents = current->documents;
    for (const auto& d : incoming.documents) {
      if (next->documents.find_document(d.doc_id)) throw Error(Errc::schema, "doc_id \"" + d.doc_id + "\" already ingested");
      next->documents.documents.push_back(d);
    }
    for (const auto& b : incoming.databooks) {
      for (const auto& existing : next->documents.databooks) {
        if (existing.databook_id == b.databook_id) {
          throw Error(Errc::schema, "databook_id \"" + b.databook_id + "\" already ingested");
        }
      }
      next->documents.databooks.push_back(b);
    }
    DisambiguateOptions dopts;
    dopts.workers = opts_.workers;
    auto result = run_pipeline(next->documents, opts_.filters, opts_.topics, dopts);
    next->graph = std::move(result.graph);
    publish(std::move(next));
    send(res, 201,
         {{"databooks", incoming.databooks.size()},
          {"documents", incoming.documents.size()},
          {"mentions", extract_entities(incoming, opts_.topics).size()}});
  }

  void remove_databook(const std::string& id, httplib::Response& res) {
    std::lock_guard lock(write_mu_);
    auto current = snapshot();
    auto next = std::make_shared<State>(*current);
    const auto summary = delete_databook(next->graph, id);
    auto& books = next->documents.databooks;
    std::erase_if(books, [&](const Databook& b) { return b.databook_id == id; });
    std::set<std::string> gone(summary.documents_removed.begin(), summary.documents_removed.end());
    std::erase_if(next->documents.documents, [&](const Document& d) { return gone.contains(d.doc_id); });
    publish(std::move(next));
    send(res, 200,
         {{"databook_id", id},
          {"nodes_removed", summary.nodes_removed},
          {"edges_removed", summary.edges_removed},
          {"documents_removed", summary.documents_removed}});
  }

  ServiceOptions opts_;
  httplib::Server server_;
  mutable std::mutex state_mu_;
  std::shared_ptr<const State> state_;
  std::mutex write_mu_;  // serializes ingest / delete / slot changes
  std::map<std::string, std::shared_ptr<const State>> slots_;
};

}  // namespace graphled
