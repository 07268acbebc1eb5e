#include "fcdl/service.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <httplib.h>
#include <json.hpp>

#include "fcdl/edit.hpp"
#include "fcdl/error.hpp"
#include "fcdl/export.hpp"

namespace fcdl {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kJsonType = "application/json";

void send(httplib::Response& res, int status, const ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", kJsonType);
}

void send_error(httplib::Response& res, ErrorKind kind, const std::string& message) {
  ordered_json body;
  body["error"] = kind_name(kind);
  body["message"] = message;
  send(res, http_status(kind), body);
}

// Runs `fn`, mapping library errors and malformed JSON to error responses.
template <class Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_error(res, e.kind(), e.what());
    } catch (const json::exception& e) {
      send_error(res, ErrorKind::kParseError, e.what());
    }
  };
}

json parse_body(const httplib::Request& req) {
  try {
    auto j = json::parse(req.body);
    if (!j.is_object()) throw Error(ErrorKind::kParseError, "request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParseError, std::string("malformed JSON body: ") + e.what());
  }
}

std::optional<std::uint64_t> revision_param(const httplib::Request& req) {
  if (!req.has_param("revision")) return std::nullopt;
  const std::string v = req.get_param_value("revision");
  std::uint64_t r = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), r);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw Error(ErrorKind::kParseError, "revision must be a non-negative integer");
  }
  return r;
}

template <class T>
std::optional<T> optional_number(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw Error(ErrorKind::kParseError, std::string("field '") + key + "' must be a number");
  if constexpr (std::is_unsigned_v<T>) {
    if (!it->is_number_unsigned()) {
      throw Error(ErrorKind::kParseError, std::string("field '") + key + "' must be a non-negative integer");
    }
  }
  return it->get<T>();
}

ordered_json graph_object(const FcdlGraph& g) { return ordered_json::parse(to_canonical_json(g)); }

ordered_json leaf_json(const DataLeaf& l) {
  ordered_json j;
  j["id"] = l.id;
  j["name"] = l.name;
  j["summary"] = l.summary;
  j["variables"] = l.variables;
  j["provenance"] = l.provenance;
  j["tags"] = l.tags;
  return j;
}

}  // namespace

int http_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParseError:
    case ErrorKind::kMissingField:
    case ErrorKind::kUnsupportedFormat:
      return 400;
    case ErrorKind::kUnknownNode:
    case ErrorKind::kUnknownGraph:
    case ErrorKind::kUnknownSegment:
      return 404;
    case ErrorKind::kStaleRevision:
      return 409;
    case ErrorKind::kKindMismatch:
    case ErrorKind::kSelfMerge:
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kEmptyText:
    case ErrorKind::kEmptyCorpus:
    case ErrorKind::kEmptyInput:
    case ErrorKind::kEmptyList:
    case ErrorKind::kDuplicateId:
      return 422;
    case ErrorKind::kIoError:
      return 500;
  }
  return 500;
}

Service::Service(DlBase base, SessionStore& store, GraphParams defaults)
    : base_(std::move(base)), store_(store), defaults_(defaults), server_(std::make_unique<httplib::Server>()) {
  defaults_.validate();
  if (!base_.empty()) {
    std::vector<TokenList> corpus;
    for (const auto& l : base_.leaves()) corpus.push_back(leaf_tokens(l));
    search_space_ = VectorSpace::build(corpus);
  }
  mount();
}

Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port) {
  if (port == 0) {
    int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorKind::kIoError, "cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    throw Error(ErrorKind::kIoError, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void Service::listen() { server_->listen_after_bind(); }

void Service::stop() {
  if (server_) server_->stop();
}

std::shared_ptr<const Workspace> Service::workspace_for(const std::string& graph_id) {
  {
    std::lock_guard lock(workspaces_mutex_);
    if (auto it = workspaces_.find(graph_id); it != workspaces_.end()) return it->second;
  }
  auto [text, granularity] = store_.source(graph_id);
  auto ws = std::make_shared<const Workspace>(std::move(text), base_, granularity);
  std::lock_guard lock(workspaces_mutex_);
  return workspaces_.try_emplace(graph_id, std::move(ws)).first->second;
}

void Service::mount() {
  auto& srv = *server_;

  srv.Post("/api/graphs", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const json body = parse_body(req);
    auto text_it = body.find("text");
    if (text_it == body.end() || !text_it->is_string()) {
      throw Error(ErrorKind::kParseError, "field 'text' (string) is required");
    }
    GraphParams params = defaults_;
    if (auto d = optional_number<double>(body, "delta")) params.delta = *d;
    if (auto t = optional_number<double>(body, "tau")) params.tau = *t;
    if (auto k = optional_number<std::size_t>(body, "k")) params.k = *k;
    params.validate();
    Granularity granularity = Granularity::kSentence;
    if (auto g = body.find("granularity"); g != body.end() && !g->is_null()) {
      if (!g->is_string()) throw Error(ErrorKind::kParseError, "field 'granularity' must be a string");
      granularity = parse_granularity(g->get<std::string>());
    }

    auto ws = std::make_shared<const Workspace>(text_it->get<std::string>(), base_, granularity);
    auto rev = store_.create(ws->text(), granularity, build_graph(*ws, params));
    {
      std::lock_guard lock(workspaces_mutex_);
      workspaces_[rev.graph_id] = ws;
    }
    ordered_json out;
    out["graph_id"] = rev.graph_id;
    out["revision"] = rev.revision;
    out["graph"] = graph_object(rev.graph);
    send(res, 201, out);
  }));

  srv.Get(R"(/api/graphs/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    auto rev = store_.get(req.matches[1], revision_param(req));
    res.status = 200;
    res.set_content(to_canonical_json(rev.graph), kJsonType);
  }));

  srv.Post(R"(/api/graphs/([^/]+)/edits)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const json body = parse_body(req);
    if (!body.contains("edit")) throw Error(ErrorKind::kParseError, "field 'edit' is required");
    const Edit edit = edit_from_json(body.at("edit"));
    const auto expected = optional_number<std::uint64_t>(body, "expected_revision");
    auto ws = workspace_for(id);
    auto rev = store_.append(id, expected, [&](const GraphRevision& latest) {
      return apply_edit(*ws, latest.graph, edit);
    });
    ordered_json out;
    out["revision"] = rev.revision;
    out["graph"] = graph_object(rev.graph);
    send(res, 200, out);
  }));

  srv.Get(R"(/api/graphs/([^/]+)/coverage/([^/]+))",
          guarded([this](const httplib::Request& req, httplib::Response& res) {
            const std::string id = req.matches[1];
            auto rev = store_.get(id, revision_param(req));
            auto ws = workspace_for(id);
            ordered_json out;
            out["fc_id"] = std::string(req.matches[2]);
            out["revision"] = rev.revision;
            out["score"] = coverage_score(*ws, rev.graph, std::string(req.matches[2]));
            send(res, 200, out);
          }));

  srv.Get(R"(/api/graphs/([^/]+)/export)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const ExportFormat format =
        parse_export_format(req.has_param("format") ? req.get_param_value("format") : std::string("json"));
    auto rev = store_.get(id, revision_param(req));
    res.status = 200;
    res.set_header("Content-Disposition", "attachment; filename=\"" + id + "-r" + std::to_string(rev.revision) +
                                              "." + std::string(extension(format)) + "\"");
    res.set_content(export_graph(rev.graph, format), std::string(content_type(format)));
  }));

  srv.Get("/api/dlbase", guarded([this](const httplib::Request&, httplib::Response& res) {
    ordered_json out = ordered_json::array();
    for (const auto& l : base_.leaves()) out.push_back(leaf_json(l));
    send(res, 200, out);
  }));

  srv.Get("/api/dlbase/search", guarded([this](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("q")) throw Error(ErrorKind::kParseError, "query parameter 'q' is required");
    std::vector<std::pair<double, const DataLeaf*>> ranked;
    if (search_space_) {
      const TermVector q = search_space_->embed(tokenize(req.get_param_value("q")));
      for (const auto& l : base_.leaves()) {
        ranked.emplace_back(cosine_distance(q, search_space_->embed(leaf_tokens(l))), &l);
      }
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return a.second->id < b.second->id;
    });
    ordered_json out = ordered_json::array();
    for (const auto& [d, l] : ranked) {
      auto j = leaf_json(*l);
      j["distance"] = std::round(d * 1e6) / 1e6;
      out.push_back(std::move(j));
    }
    send(res, 200, out);
  }));

  srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    if (res.status == 404) send_error(res, ErrorKind::kUnknownGraph, "no such endpoint");
  });
}

}  // namespace fcdl
