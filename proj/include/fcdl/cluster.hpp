#pragma once

// Average-linkage agglomerative clustering with a stop threshold.

#include <cstddef>
#include <span>
#include <vector>

#include "fcdl/semvec.hpp"

namespace fcdl {

using ItemId = std::size_t;

struct ClusterItem {
  ItemId id;
  TermVector vector;
};

struct Cluster {
  std::vector<ItemId> member_ids;  // sorted ascending, non-empty

  std::size_t size() const noexcept { return member_ids.size(); }
  ItemId min_id() const { return member_ids.front(); }

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

/// Starts from singletons and repeatedly merges the pair with the smallest
/// average pairwise distance until that linkage is >= tau or one cluster is
/// left. Equal linkages are resolved by the pair's (smaller min id, larger min
/// id), so the result depends only on ids, not on input order.
///
/// Output is sorted by each cluster's smallest member id.
/// Throws EmptyInput for no items, InvalidArgument for tau outside [0, 1] or
/// duplicate ids.
std::vector<Cluster> agglomerate(std::span<const ClusterItem> items, const Metric& metric,
                                 double tau);

inline std::vector<Cluster> agglomerate(std::span<const ClusterItem> items, double tau) {
  return agglomerate(items, cosine_distance, tau);
}

}  // namespace fcdl
