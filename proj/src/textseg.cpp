#include "fcdl/textseg.hpp"

#include <array>

#include "fcdl/error.hpp"

namespace fcdl {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

struct Span {
  std::size_t begin;
  std::size_t end;
};

// A blank line is a newline followed by optional horizontal whitespace and
// another newline. Returns paragraph spans of `text`.
std::vector<Span> paragraphs(std::string_view text) {
  std::vector<Span> out;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '\n') {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size() && text[j] != '\n' && is_space(text[j])) ++j;
    if (j < text.size() && text[j] == '\n') {
      out.push_back({start, i});
      // Swallow any further blank lines.
      while (j + 1 < text.size() && is_space(text[j + 1])) ++j;
      start = j + 1;
      i = start;
    } else {
      i = j;
    }
  }
  out.push_back({start, text.size()});
  return out;
}

constexpr std::string_view kIdeographicStop = "\xE3\x80\x82";  // U+3002

// Length in bytes of a sentence terminator starting at `pos`, or 0.
std::size_t terminator_at(std::string_view text, std::size_t pos) {
  char c = text[pos];
  if (c == '.' || c == '?' || c == '!') return 1;
  if (text.substr(pos, kIdeographicStop.size()) == kIdeographicStop) return kIdeographicStop.size();
  return 0;
}

void sentences(std::string_view text, Span para, std::vector<Span>& out) {
  std::size_t start = para.begin;
  for (std::size_t i = para.begin; i < para.end;) {
    std::size_t len = terminator_at(text, i);
    if (len == 0) {
      ++i;
      continue;
    }
    std::size_t after = i + len;
    if (after == para.end || is_space(text[after])) {
      out.push_back({start, after});
      start = after;
    }
    i = after;
  }
  out.push_back({start, para.end});
}

}  // namespace

std::string_view granularity_name(Granularity granularity) {
  return granularity == Granularity::kParagraph ? "paragraph" : "sentence";
}

Granularity parse_granularity(std::string_view name) {
  if (name == "paragraph") return Granularity::kParagraph;
  if (name == "sentence") return Granularity::kSentence;
  throw Error(ErrorKind::kInvalidArgument, "unknown granularity '" + std::string(name) + "'");
}

std::vector<Segment> segment(std::string_view text, Granularity granularity) {
  const std::string norm = normalize_nfc(text);
  const std::string_view view(norm);

  std::vector<Span> spans;
  for (const auto& para : paragraphs(view)) {
    if (granularity == Granularity::kSentence) {
      sentences(view, para, spans);
    } else {
      spans.push_back(para);
    }
  }

  std::vector<Segment> out;
  for (auto [b, e] : spans) {
    while (b < e && is_space(view[b])) ++b;
    while (e > b && is_space(view[e - 1])) --e;
    if (b == e) continue;
    std::string_view piece = view.substr(b, e - b);
    if (tokenize(piece).empty()) continue;
    Segment s;
    s.index = out.size();
    s.text = std::string(piece);
    s.offset = b;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Term> make_abstract(const Segment& segment, const VectorSpace& space, std::size_t k) {
  if (k == 0) throw Error(ErrorKind::kInvalidArgument, "abstract size k must be positive");
  const TokenList tokens = tokenize(segment.text);
  for (const auto& t : tokens) {
    if (!space.contains(t)) {
      throw Error(ErrorKind::kUnknownSegment,
                  "segment " + std::to_string(segment.index) + " token '" + t + "' not in vocabulary");
    }
  }
  return space.embed(tokens).top_terms(k);
}

}  // namespace fcdl
