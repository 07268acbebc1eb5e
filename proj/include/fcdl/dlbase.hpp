#pragma once

// The Data Leaf base: metadata records describing the event flow behind a
// dataset, plus the threshold scan that collects leaves near feature concepts.

#include <cstddef>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fcdl/semvec.hpp"

namespace fcdl {

struct DataLeaf {
  std::string id;
  std::string name;
  std::string summary;
  std::vector<std::string> variables;
  std::string provenance;
  std::vector<std::string> tags;

  friend bool operator==(const DataLeaf&, const DataLeaf&) = default;
};

enum class BaseFormat { kJson, kCsv };

/// Parses "json" / "csv"; throws UnsupportedFormat otherwise.
BaseFormat parse_base_format(std::string_view name);

class DlBase {
 public:
  DlBase() = default;
  /// Validates every record; throws DuplicateId / MissingField / ParseError.
  explicit DlBase(std::vector<DataLeaf> leaves);

  const std::vector<DataLeaf>& leaves() const noexcept { return leaves_; }
  std::size_t size() const noexcept { return leaves_.size(); }
  bool empty() const noexcept { return leaves_.empty(); }
  /// nullptr when absent.
  const DataLeaf* find(std::string_view id) const;

  friend bool operator==(const DlBase&, const DlBase&) = default;

 private:
  std::vector<DataLeaf> leaves_;
};

/// JSON: a top-level array of leaf objects; `provenance` and `tags` optional.
/// CSV: header `id,name,summary,variables,provenance,tags`, list fields split
/// on `;`, RFC 4180 quoting, LF or CRLF line ends.
DlBase load_dl_base(std::istream& in, BaseFormat format);
DlBase load_dl_base(std::string_view bytes, BaseFormat format);
/// Format picked from the extension (.csv, otherwise JSON).
DlBase load_dl_base_file(const std::string& path);

/// LF line ends, 2-space indented JSON.
std::string serialize_dl_base(const DlBase& base, BaseFormat format);

/// tokenize(name) ++ tokenize(summary) ++ tokenize(v) for each variable.
TokenList leaf_tokens(const DataLeaf& leaf);

struct CollectedLeaf {
  std::string leaf_id;
  std::string nearest_fc_id;
  double distance;

  friend bool operator==(const CollectedLeaf&, const CollectedLeaf&) = default;
};

using FcVector = std::pair<std::string, TermVector>;

/// Leaves whose smallest distance to any FC vector is strictly below `delta`,
/// sorted by leaf id. The nearest FC breaks ties by smallest fc id.
std::vector<CollectedLeaf> collect(const DlBase& base, std::span<const FcVector> fc_vectors,
                                   const VectorSpace& space, double delta,
                                   const Metric& metric = cosine_distance);

}  // namespace fcdl
