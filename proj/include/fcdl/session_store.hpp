#pragma once

// Revisioned graph sessions persisted as one JSON snapshot file per graph.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "fcdl/fcgraph.hpp"
#include "fcdl/textseg.hpp"

namespace fcdl {

struct GraphRevision {
  std::string graph_id;
  std::uint64_t revision = 0;
  FcdlGraph graph;  // graph.revision == revision
  std::optional<std::uint64_t> parent_revision;
};

/// Thread-safe. Mutations of one graph are serialized; every acknowledged
/// mutation has been written and fsynced to `<dir>/<graph_id>.json` (via a
/// temp file and rename) before the call returns.
class SessionStore {
 public:
  /// Creates `dir` if needed and reloads every snapshot found there.
  explicit SessionStore(std::filesystem::path dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }

  /// Stores `graph` as revision 0 of a fresh graph id.
  GraphRevision create(std::string text, Granularity granularity, FcdlGraph graph);

  /// Throws UnknownGraph for an unknown id or revision. Latest when unset.
  GraphRevision get(const std::string& graph_id, std::optional<std::uint64_t> revision = std::nullopt) const;
  std::vector<GraphRevision> history(const std::string& graph_id) const;
  std::vector<std::string> graph_ids() const;

  /// The requirement text and granularity revision 0 was built from.
  std::pair<std::string, Granularity> source(const std::string& graph_id) const;

  using Mutation = std::function<FcdlGraph(const GraphRevision& latest)>;
  /// Appends `mutate(latest)` as the next revision. Throws StaleRevision when
  /// `expected_revision` is set and is not the latest revision.
  GraphRevision append(const std::string& graph_id, std::optional<std::uint64_t> expected_revision,
                       const Mutation& mutate);

 private:
  struct Session {
    std::string graph_id;
    std::string text;
    Granularity granularity = Granularity::kSentence;
    std::vector<GraphRevision> revisions;
    mutable std::shared_mutex mutex;
  };

  std::shared_ptr<Session> find(const std::string& graph_id) const;
  void persist(const Session& session) const;
  void load_file(const std::filesystem::path& path);

  std::filesystem::path dir_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
};

}  // namespace fcdl
