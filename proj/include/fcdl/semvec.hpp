#pragma once

// TF-IDF vector space and cosine distance over tokenized text.

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace fcdl {

using Term = std::string;
using TokenList = std::vector<Term>;

/// NFC-normalizes UTF-8 text. Invalid UTF-8 sequences are replaced with U+FFFD.
std::string normalize_nfc(std::string_view text);

/// NFC, lowercase, then split on every code point that is neither alphabetic
/// nor a decimal digit. No stemming, no stop-word removal.
TokenList tokenize(std::string_view text);

/// Sparse TF-IDF vector. Entries are sorted by term and every weight is > 0.
class TermVector {
 public:
  using Entry = std::pair<Term, double>;

  TermVector() = default;
  /// Builds from arbitrary (term, weight) pairs; duplicate terms are summed and
  /// non-positive weights dropped.
  explicit TermVector(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }

  /// 0.0 for terms not present.
  double weight(std::string_view term) const;
  double squared_norm() const;

  /// Terms ordered by descending weight, lexicographic on ties.
  std::vector<Term> top_terms(std::size_t k) const;

  friend bool operator==(const TermVector&, const TermVector&) = default;

 private:
  std::vector<Entry> entries_;
};

/// Document-frequency table over a fixed corpus. Immutable once built.
class VectorSpace {
 public:
  /// Throws EmptyCorpus when no document contributes a token.
  static VectorSpace build(std::span<const TokenList> corpus);

  std::size_t doc_count() const noexcept { return doc_count_; }
  std::size_t vocabulary_size() const noexcept { return doc_freq_.size(); }
  /// Lexicographically ordered.
  std::vector<Term> vocabulary() const;

  bool contains(std::string_view term) const;
  /// 0 for unknown terms.
  std::size_t doc_freq(std::string_view term) const;
  /// 1 + ln(N / df). Only meaningful for vocabulary terms.
  double idf(std::string_view term) const;

  /// weight(t) = count(t) * idf(t); out-of-vocabulary tokens are ignored.
  TermVector embed(std::span<const Term> tokens) const;

  nlohmann::ordered_json to_json() const;
  static VectorSpace from_json(const nlohmann::json& j);

  friend bool operator==(const VectorSpace&, const VectorSpace&) = default;

 private:
  std::size_t doc_count_ = 0;
  std::map<Term, std::size_t, std::less<>> doc_freq_;
};

/// Distance between two vectors in [0, 1].
using Metric = std::function<double(const TermVector&, const TermVector&)>;

/// 1 - cos(a, b), clamped to [0, 1]. Empty vs empty is 0, empty vs non-empty 1.
double cosine_distance(const TermVector& a, const TermVector& b);

/// Mean of the L2-normalized non-empty inputs. Throws EmptyList on an empty list.
TermVector centroid(std::span<const TermVector> vectors);

}  // namespace fcdl
