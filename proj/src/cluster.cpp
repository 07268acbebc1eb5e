#include "fcdl/cluster.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>

#include "fcdl/error.hpp"

namespace fcdl {

namespace {

// Sum of pairwise distances with `lhs` (the cluster with the smaller min id)
// as the outer loop. Both the incremental update and a full recomputation
// sum in this order, so linkages are bit-identical either way.
double linkage(const std::vector<std::size_t>& lhs, const std::vector<std::size_t>& rhs,
               const std::vector<double>& dist, std::size_t n) {
  double sum = 0.0;
  for (auto i : lhs) {
    for (auto j : rhs) sum += dist[i * n + j];
  }
  return sum / static_cast<double>(lhs.size() * rhs.size());
}

}  // namespace

std::vector<Cluster> agglomerate(std::span<const ClusterItem> items, const Metric& metric,
                                 double tau) {
  if (items.empty()) throw Error(ErrorKind::kEmptyInput, "nothing to cluster");
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "tau must lie in [0, 1]");
  }

  const std::size_t n = items.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return items[a].id < items[b].id; });
  for (std::size_t i = 1; i < n; ++i) {
    if (items[order[i]].id == items[order[i - 1]].id) {
      throw Error(ErrorKind::kInvalidArgument, "duplicate item id " + std::to_string(items[order[i]].id));
    }
  }

  // Positions 0..n-1 follow ascending id, so a cluster's front() is its min id.
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = metric(items[order[i]].vector, items[order[j]].vector);
      dist[i * n + j] = d;
      dist[j * n + i] = d;
    }
  }

  std::vector<std::vector<std::size_t>> members(n);
  std::vector<bool> alive(n, true);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};
  // link[a * n + b] for a < b in slot order; slot a always holds the smaller min.
  std::vector<double> link(dist);

  std::size_t remaining = n;
  while (remaining > 1) {
    std::size_t best_a = n;
    std::size_t best_b = n;
    double best = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      if (!alive[a]) continue;
      for (std::size_t b = a + 1; b < n; ++b) {
        if (!alive[b]) continue;
        double l = link[a * n + b];
        // Slots are ordered by min id, so scanning (a, b) ascending already
        // realizes the id tie-break; only a strictly smaller linkage wins.
        if (best_a == n || l < best) {
          best = l;
          best_a = a;
          best_b = b;
        }
      }
    }
    if (best >= tau) break;

    auto& merged = members[best_a];
    merged.insert(merged.end(), members[best_b].begin(), members[best_b].end());
    std::sort(merged.begin(), merged.end());
    members[best_b].clear();
    alive[best_b] = false;
    --remaining;

    for (std::size_t c = 0; c < n; ++c) {
      if (!alive[c] || c == best_a) continue;
      const bool a_first = members[best_a].front() < members[c].front();
      double l = a_first ? linkage(members[best_a], members[c], dist, n)
                         : linkage(members[c], members[best_a], dist, n);
      link[std::min(best_a, c) * n + std::max(best_a, c)] = l;
    }
  }

  std::vector<Cluster> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (!alive[s]) continue;
    Cluster c;
    for (auto pos : members[s]) c.member_ids.push_back(items[order[pos]].id);
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(),
            [](const Cluster& a, const Cluster& b) { return a.min_id() < b.min_id(); });
  return out;
}

}  // namespace fcdl
