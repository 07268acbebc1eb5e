#pragma once

// JSON-over-HTTP service hosting revisioned graph sessions.
//
//   POST /api/graphs                        {text, delta?, tau?, k?, granularity?} -> 201
//   GET  /api/graphs/{id}?revision=r        -> canonical graph
//   POST /api/graphs/{id}/edits             {edit, expected_revision?} -> {revision, graph}
//   GET  /api/graphs/{id}/coverage/{fc_id}  -> {score}
//   GET  /api/graphs/{id}/export?format=f   -> file download
//   GET  /api/dlbase                        -> leaves
//   GET  /api/dlbase/search?q=...           -> leaves with distance, nearest first
//
// Errors come back as {"error": <ErrorKind>, "message": ...} with 400, 404,
// 409 or 422.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "fcdl/dlbase.hpp"
#include "fcdl/error.hpp"
#include "fcdl/fcgraph.hpp"
#include "fcdl/session_store.hpp"

namespace httplib {
class Server;
}

namespace fcdl {

/// HTTP status for a library error kind.
int http_status(ErrorKind kind);

class Service {
 public:
  Service(DlBase base, SessionStore& store, GraphParams defaults = {});
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds `host:port`; port 0 picks a free one. Returns the bound port.
  /// Throws IoError when the port cannot be bound.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void listen();
  void stop();

 private:
  void mount();
  std::shared_ptr<const Workspace> workspace_for(const std::string& graph_id);

  DlBase base_;
  SessionStore& store_;
  GraphParams defaults_;
  std::optional<VectorSpace> search_space_;
  std::unique_ptr<httplib::Server> server_;
  std::mutex workspaces_mutex_;
  std::map<std::string, std::shared_ptr<const Workspace>> workspaces_;
};

}  // namespace fcdl
