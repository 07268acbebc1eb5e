#include "fcdl/session_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "fcdl/error.hpp"

namespace fcdl {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::string_view kIdPrefix = "g";

std::optional<std::uint64_t> id_number(std::string_view id) {
  if (id.size() <= kIdPrefix.size() || id.substr(0, kIdPrefix.size()) != kIdPrefix) return std::nullopt;
  std::uint64_t v = 0;
  for (char c : id.substr(kIdPrefix.size())) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

void write_all(int fd, const std::string& data, const fs::path& path) {
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorKind::kIoError, "write " + path.string() + ": " + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

// Replace `path` with `data` so that a crash leaves either the old or the new
// file, never a torn one.
void atomic_write(const fs::path& path, const std::string& data) {
  const fs::path tmp = path.string() + ".tmp";
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw Error(ErrorKind::kIoError, "open " + tmp.string() + ": " + std::strerror(errno));
  try {
    write_all(fd, data, tmp);
    if (::fsync(fd) != 0) throw Error(ErrorKind::kIoError, "fsync " + tmp.string() + ": " + std::strerror(errno));
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
  if (::rename(tmp.c_str(), path.c_str()) != 0) {
    throw Error(ErrorKind::kIoError, "rename " + tmp.string() + ": " + std::strerror(errno));
  }
  int dfd = ::open(path.parent_path().c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
  if (dfd >= 0) {
    ::fsync(dfd);
    ::close(dfd);
  }
}

}  // namespace

SessionStore::SessionStore(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error(ErrorKind::kIoError, "cannot create " + dir_.string() + ": " + ec.message());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) load_file(f);
}

void SessionStore::load_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  auto session = std::make_shared<Session>();
  try {
    auto j = json::parse(bytes);
    session->graph_id = j.at("graph_id").get<std::string>();
    session->text = j.at("text").get<std::string>();
    session->granularity = parse_granularity(j.at("granularity").get<std::string>());
    for (const auto& r : j.at("revisions")) {
      GraphRevision rev;
      rev.graph_id = session->graph_id;
      rev.revision = r.at("revision").get<std::uint64_t>();
      if (!r.at("parent_revision").is_null()) rev.parent_revision = r.at("parent_revision").get<std::uint64_t>();
      rev.graph = graph_from_json(r.at("graph").dump());
      if (rev.revision != session->revisions.size()) {
        throw Error(ErrorKind::kParseError, "revisions are not consecutive");
      }
      session->revisions.push_back(std::move(rev));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParseError, path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
  if (session->revisions.empty()) throw Error(ErrorKind::kParseError, path.string() + ": no revisions");
  if (auto n = id_number(session->graph_id)) next_id_ = std::max(next_id_, *n + 1);
  sessions_[session->graph_id] = std::move(session);
}

void SessionStore::persist(const Session& s) const {
  ordered_json j;
  j["graph_id"] = s.graph_id;
  j["text"] = s.text;
  j["granularity"] = granularity_name(s.granularity);
  auto& revs = j["revisions"] = ordered_json::array();
  for (const auto& r : s.revisions) {
    ordered_json rj;
    rj["revision"] = r.revision;
    rj["parent_revision"] = r.parent_revision ? ordered_json(*r.parent_revision) : ordered_json(nullptr);
    rj["graph"] = ordered_json::parse(to_canonical_json(r.graph));
    revs.push_back(std::move(rj));
  }
  atomic_write(dir_ / (s.graph_id + ".json"), j.dump(2) + "\n");
}

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& graph_id) const {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(graph_id);
  if (it == sessions_.end()) throw Error(ErrorKind::kUnknownGraph, "no graph '" + graph_id + "'");
  return it->second;
}

GraphRevision SessionStore::create(std::string text, Granularity granularity, FcdlGraph graph) {
  std::unique_lock lock(mutex_);
  auto session = std::make_shared<Session>();
  session->graph_id = std::string(kIdPrefix) + std::to_string(next_id_);
  session->text = std::move(text);
  session->granularity = granularity;
  graph.revision = 0;
  session->revisions.push_back({session->graph_id, 0, std::move(graph), std::nullopt});
  persist(*session);
  ++next_id_;
  sessions_[session->graph_id] = session;
  return session->revisions.front();
}

GraphRevision SessionStore::get(const std::string& graph_id, std::optional<std::uint64_t> revision) const {
  auto s = find(graph_id);
  std::shared_lock lock(s->mutex);
  if (!revision) return s->revisions.back();
  if (*revision >= s->revisions.size()) {
    throw Error(ErrorKind::kUnknownGraph, "graph '" + graph_id + "' has no revision " + std::to_string(*revision));
  }
  return s->revisions[*revision];
}

std::vector<GraphRevision> SessionStore::history(const std::string& graph_id) const {
  auto s = find(graph_id);
  std::shared_lock lock(s->mutex);
  return s->revisions;
}

std::vector<std::string> SessionStore::graph_ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

std::pair<std::string, Granularity> SessionStore::source(const std::string& graph_id) const {
  auto s = find(graph_id);
  return {s->text, s->granularity};
}

GraphRevision SessionStore::append(const std::string& graph_id, std::optional<std::uint64_t> expected_revision,
                                   const Mutation& mutate) {
  auto s = find(graph_id);
  std::unique_lock lock(s->mutex);
  const GraphRevision& latest = s->revisions.back();
  if (expected_revision && *expected_revision != latest.revision) {
    throw Error(ErrorKind::kStaleRevision, "expected revision " + std::to_string(*expected_revision) +
                                               " but latest is " + std::to_string(latest.revision));
  }
  GraphRevision next;
  next.graph_id = graph_id;
  next.revision = latest.revision + 1;
  next.parent_revision = latest.revision;
  next.graph = mutate(latest);
  next.graph.revision = next.revision;
  s->revisions.push_back(std::move(next));
  try {
    persist(*s);
  } catch (...) {
    s->revisions.pop_back();
    throw;
  }
  return s->revisions.back();
}

}  // namespace fcdl
