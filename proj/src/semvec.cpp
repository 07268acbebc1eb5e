#include "fcdl/semvec.hpp"

#include <algorithm>
#include <cmath>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "fcdl/error.hpp"

namespace fcdl {

namespace {

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    throw Error(ErrorKind::kIoError, "ICU NFC normalizer unavailable");
  }
  return *n;
}

icu::UnicodeString normalized(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(s, status);
  if (U_FAILURE(status)) {
    throw Error(ErrorKind::kParseError, "text could not be NFC-normalized");
  }
  return out;
}

bool is_word_char(UChar32 c) {
  return u_hasBinaryProperty(c, UCHAR_ALPHABETIC) || u_isdigit(c);
}

}  // namespace

std::string normalize_nfc(std::string_view text) {
  auto u = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  std::string out;
  normalized(u).toUTF8String(out);
  return out;
}

TokenList tokenize(std::string_view text) {
  auto u = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  u = normalized(u);
  u.toLower(icu::Locale::getRoot());
  // Full case mapping can leave the string unnormalized (e.g. U+0130).
  u = normalized(u);

  TokenList tokens;
  int32_t start = -1;
  int32_t i = 0;
  auto flush = [&](int32_t end) {
    if (start >= 0 && end > start) {
      std::string tok;
      u.tempSubStringBetween(start, end).toUTF8String(tok);
      tokens.push_back(std::move(tok));
    }
    start = -1;
  };
  while (i < u.length()) {
    UChar32 c = u.char32At(i);
    if (is_word_char(c)) {
      if (start < 0) start = i;
    } else {
      flush(i);
    }
    i = u.moveIndex32(i, 1);
  }
  flush(u.length());
  return tokens;
}

// --- TermVector ---

TermVector::TermVector(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (auto& e : entries) {
    if (!entries_.empty() && entries_.back().first == e.first) {
      entries_.back().second += e.second;
    } else {
      entries_.push_back(std::move(e));
    }
  }
  std::erase_if(entries_, [](const Entry& e) { return !(e.second > 0.0); });
}

double TermVector::weight(std::string_view term) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), term,
                             [](const Entry& e, std::string_view t) { return e.first < t; });
  return (it != entries_.end() && it->first == term) ? it->second : 0.0;
}

double TermVector::squared_norm() const {
  double s = 0.0;
  for (const auto& [_, w] : entries_) s += w * w;
  return s;
}

std::vector<Term> TermVector::top_terms(std::size_t k) const {
  std::vector<const Entry*> order;
  order.reserve(entries_.size());
  for (const auto& e : entries_) order.push_back(&e);
  std::stable_sort(order.begin(), order.end(), [](const Entry* a, const Entry* b) {
    if (a->second != b->second) return a->second > b->second;
    return a->first < b->first;
  });
  std::vector<Term> out;
  for (std::size_t i = 0; i < order.size() && i < k; ++i) out.push_back(order[i]->first);
  return out;
}

// --- VectorSpace ---

VectorSpace VectorSpace::build(std::span<const TokenList> corpus) {
  VectorSpace space;
  space.doc_count_ = corpus.size();
  for (const auto& doc : corpus) {
    std::vector<Term> distinct(doc.begin(), doc.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (auto& t : distinct) ++space.doc_freq_[std::move(t)];
  }
  if (space.doc_freq_.empty()) {
    throw Error(ErrorKind::kEmptyCorpus, "corpus has no tokens");
  }
  return space;
}

std::vector<Term> VectorSpace::vocabulary() const {
  std::vector<Term> v;
  v.reserve(doc_freq_.size());
  for (const auto& [t, _] : doc_freq_) v.push_back(t);
  return v;
}

bool VectorSpace::contains(std::string_view term) const {
  return doc_freq_.find(term) != doc_freq_.end();
}

std::size_t VectorSpace::doc_freq(std::string_view term) const {
  auto it = doc_freq_.find(term);
  return it == doc_freq_.end() ? 0 : it->second;
}

double VectorSpace::idf(std::string_view term) const {
  return 1.0 + std::log(static_cast<double>(doc_count_) / static_cast<double>(doc_freq(term)));
}

TermVector VectorSpace::embed(std::span<const Term> tokens) const {
  std::map<Term, std::size_t, std::less<>> counts;
  for (const auto& t : tokens) {
    if (contains(t)) ++counts[t];
  }
  std::vector<TermVector::Entry> entries;
  entries.reserve(counts.size());
  for (const auto& [t, c] : counts) {
    entries.emplace_back(t, static_cast<double>(c) * idf(t));
  }
  return TermVector(std::move(entries));
}

nlohmann::ordered_json VectorSpace::to_json() const {
  auto vocab = nlohmann::ordered_json::array();
  auto df = nlohmann::ordered_json::array();
  for (const auto& [t, n] : doc_freq_) {
    vocab.push_back(t);
    df.push_back(n);
  }
  nlohmann::ordered_json j;
  j["doc_count"] = doc_count_;
  j["vocabulary"] = std::move(vocab);
  j["doc_freq"] = std::move(df);
  return j;
}

VectorSpace VectorSpace::from_json(const nlohmann::json& j) {
  try {
    VectorSpace space;
    space.doc_count_ = j.at("doc_count").get<std::size_t>();
    const auto& vocab = j.at("vocabulary");
    const auto& df = j.at("doc_freq");
    if (vocab.size() != df.size()) {
      throw Error(ErrorKind::kParseError, "vocabulary and doc_freq lengths differ");
    }
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      auto n = df[i].get<std::size_t>();
      if (n == 0 || n > space.doc_count_) {
        throw Error(ErrorKind::kParseError, "doc_freq out of range for '" + vocab[i].get<std::string>() + "'");
      }
      space.doc_freq_[vocab[i].get<std::string>()] = n;
    }
    if (space.doc_freq_.empty()) throw Error(ErrorKind::kEmptyCorpus, "empty vocabulary");
    return space;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, e.what());
  }
}

// --- distance ---

double cosine_distance(const TermVector& a, const TermVector& b) {
  if (a.empty() || b.empty()) return (a.empty() && b.empty()) ? 0.0 : 1.0;
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  double dot = 0.0;
  auto ia = ea.begin();
  auto ib = eb.begin();
  while (ia != ea.end() && ib != eb.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  double d = 1.0 - dot / (std::sqrt(a.squared_norm()) * std::sqrt(b.squared_norm()));
  return std::clamp(d, 0.0, 1.0);
}

TermVector centroid(std::span<const TermVector> vectors) {
  if (vectors.empty()) throw Error(ErrorKind::kEmptyList, "centroid of an empty list");
  std::map<Term, double> acc;
  std::size_t used = 0;
  for (const auto& v : vectors) {
    if (v.empty()) continue;
    ++used;
    double norm = std::sqrt(v.squared_norm());
    for (const auto& [t, w] : v.entries()) acc[t] += w / norm;
  }
  std::vector<TermVector::Entry> entries;
  for (const auto& [t, w] : acc) entries.emplace_back(t, w / static_cast<double>(used));
  return TermVector(std::move(entries));
}

}  // namespace fcdl
