#pragma once

// Splitting requirement text into segments and extracting their abstracts.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fcdl/semvec.hpp"

namespace fcdl {

enum class Granularity {
  kParagraph,  // blank-line paragraphs only
  kSentence,   // sentences within paragraphs (default)
};

/// "paragraph" | "sentence"; parse throws InvalidArgument otherwise.
std::string_view granularity_name(Granularity granularity);
Granularity parse_granularity(std::string_view name);

struct Segment {
  std::size_t index = 0;
  std::string text;  // trimmed, NFC
  /// Byte offset of `text` within the NFC-normalized input.
  std::size_t offset = 0;
  /// Top-k TF-IDF terms; empty until make_abstract fills it.
  std::vector<Term> abstract;

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Paragraphs break at blank lines; sentences end at `.`, `?`, `!` or `。`
/// followed by whitespace or end of text. Spans without tokens are dropped.
/// Abbreviations such as "e.g. " are not special-cased and do split.
std::vector<Segment> segment(std::string_view text,
                             Granularity granularity = Granularity::kSentence);

/// The k segment tokens with highest weight in `space`, descending weight then
/// lexicographic. Throws UnknownSegment if a segment token is not in the space.
std::vector<Term> make_abstract(const Segment& segment, const VectorSpace& space, std::size_t k);

}  // namespace fcdl
