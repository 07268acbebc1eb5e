#include "fcdl/dlbase.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <unicode/ustring.h>

#include "fcdl/error.hpp"

namespace fcdl {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

void check_utf8(std::string_view bytes) {
  UErrorCode status = U_ZERO_ERROR;
  int32_t needed = 0;
  u_strFromUTF8(nullptr, 0, &needed, bytes.data(), static_cast<int32_t>(bytes.size()), &status);
  if (status == U_INVALID_CHAR_FOUND || status == U_ILLEGAL_CHAR_FOUND) {
    throw Error(ErrorKind::kParseError, "input is not valid UTF-8");
  }
}

std::string_view strip_bom(std::string_view bytes) {
  constexpr std::string_view kBom = "\xEF\xBB\xBF";
  if (bytes.substr(0, kBom.size()) == kBom) bytes.remove_prefix(kBom.size());
  return bytes;
}

// `where` names the record for messages: "record 3" or "line 7".
void validate(const DataLeaf& leaf, const std::string& where) {
  auto missing = [&](const char* field) {
    std::string who = leaf.id.empty() ? where : "record '" + leaf.id + "'";
    throw Error(ErrorKind::kMissingField, who + ": field '" + field + "'");
  };
  if (trim(leaf.id).empty()) missing("id");
  if (trim(leaf.name).empty()) missing("name");
  if (trim(leaf.summary).empty()) missing("summary");
  if (tokenize(leaf.name).empty() && tokenize(leaf.summary).empty()) missing("summary");
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(';', start);
    if (end == std::string_view::npos) end = s.size();
    auto item = trim(s.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    start = end + 1;
  }
  return out;
}

// --- JSON ---

std::string string_field(const json& rec, const char* field, bool required, const std::string& where) {
  auto it = rec.find(field);
  if (it == rec.end() || it->is_null()) {
    if (required) {
      std::string who = where;
      if (auto id = rec.find("id"); id != rec.end() && id->is_string()) {
        who = "record '" + id->get<std::string>() + "'";
      }
      throw Error(ErrorKind::kMissingField, who + ": field '" + field + "'");
    }
    return {};
  }
  if (!it->is_string()) {
    throw Error(ErrorKind::kParseError, where + ": field '" + field + "' must be a string");
  }
  return it->get<std::string>();
}

std::vector<std::string> list_field(const json& rec, const char* field, bool required,
                                    const std::string& where) {
  auto it = rec.find(field);
  if (it == rec.end() || it->is_null()) {
    if (required) {
      std::string who = where;
      if (auto id = rec.find("id"); id != rec.end() && id->is_string()) {
        who = "record '" + id->get<std::string>() + "'";
      }
      throw Error(ErrorKind::kMissingField, who + ": field '" + field + "'");
    }
    return {};
  }
  if (!it->is_array()) {
    throw Error(ErrorKind::kParseError, where + ": field '" + field + "' must be an array");
  }
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) {
      throw Error(ErrorKind::kParseError, where + ": field '" + field + "' must hold strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::vector<DataLeaf> parse_json(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParseError, "byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorKind::kParseError, "top level must be an array of leaves");

  std::vector<DataLeaf> leaves;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& rec = doc[i];
    const std::string where = "record " + std::to_string(i);
    if (!rec.is_object()) throw Error(ErrorKind::kParseError, where + ": expected an object");
    DataLeaf leaf;
    leaf.id = string_field(rec, "id", true, where);
    leaf.name = string_field(rec, "name", true, where);
    leaf.summary = string_field(rec, "summary", true, where);
    leaf.variables = list_field(rec, "variables", true, where);
    leaf.provenance = string_field(rec, "provenance", false, where);
    leaf.tags = list_field(rec, "tags", false, where);
    validate(leaf, where);
    leaves.push_back(std::move(leaf));
  }
  return leaves;
}

// --- CSV ---

struct CsvRow {
  std::size_t line;
  std::vector<std::string> fields;
};

std::vector<CsvRow> parse_csv_rows(std::string_view s) {
  std::vector<CsvRow> rows;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < s.size()) {
    CsvRow row{line, {}};
    std::string field;
    bool done = false;
    while (!done) {
      if (i < s.size() && s[i] == '"') {
        std::size_t open_line = line;
        ++i;
        for (;;) {
          if (i >= s.size()) {
            throw Error(ErrorKind::kParseError, "line " + std::to_string(open_line) + ": unterminated quoted field");
          }
          if (s[i] == '"') {
            if (i + 1 < s.size() && s[i + 1] == '"') {
              field.push_back('"');
              i += 2;
              continue;
            }
            ++i;
            break;
          }
          if (s[i] == '\n') ++line;
          field.push_back(s[i++]);
        }
        if (i < s.size() && s[i] != ',' && s[i] != '\n' && s[i] != '\r') {
          throw Error(ErrorKind::kParseError, "line " + std::to_string(line) + ": text after closing quote");
        }
      } else {
        while (i < s.size() && s[i] != ',' && s[i] != '\n' && s[i] != '\r') {
          if (s[i] == '"') {
            throw Error(ErrorKind::kParseError, "line " + std::to_string(line) + ": stray quote in unquoted field");
          }
          field.push_back(s[i++]);
        }
      }
      row.fields.push_back(std::move(field));
      field.clear();
      if (i >= s.size()) {
        done = true;
      } else if (s[i] == ',') {
        ++i;
      } else {
        if (s[i] == '\r') ++i;
        if (i < s.size() && s[i] == '\n') ++i;
        ++line;
        done = true;
      }
    }
    rows.push_back(std::move(row));
  }
  // A trailing blank line parses as one empty field; drop such rows.
  std::erase_if(rows, [](const CsvRow& r) { return r.fields.size() == 1 && r.fields[0].empty(); });
  return rows;
}

constexpr std::array<std::string_view, 6> kCsvHeader = {"id", "name", "summary", "variables", "provenance", "tags"};

std::vector<DataLeaf> parse_csv(std::string_view bytes) {
  auto rows = parse_csv_rows(bytes);
  if (rows.empty()) throw Error(ErrorKind::kParseError, "line 1: missing header row");
  const auto& header = rows.front().fields;
  if (header.size() != kCsvHeader.size() || !std::equal(header.begin(), header.end(), kCsvHeader.begin())) {
    throw Error(ErrorKind::kParseError, "line 1: header must be id,name,summary,variables,provenance,tags");
  }
  std::vector<DataLeaf> leaves;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "line " + std::to_string(row.line);
    if (row.fields.size() != kCsvHeader.size()) {
      throw Error(ErrorKind::kParseError, where + ": expected 6 fields, got " + std::to_string(row.fields.size()));
    }
    DataLeaf leaf;
    leaf.id = row.fields[0];
    leaf.name = row.fields[1];
    leaf.summary = row.fields[2];
    leaf.variables = split_list(row.fields[3]);
    leaf.provenance = row.fields[4];
    leaf.tags = split_list(row.fields[5]);
    validate(leaf, where);
    leaves.push_back(std::move(leaf));
  }
  return leaves;
}

std::string csv_quote(std::string_view v) {
  if (v.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(v);
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string join_list(const std::vector<std::string>& items, const std::string& id) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].find(';') != std::string::npos) {
      throw Error(ErrorKind::kInvalidArgument,
                  "record '" + id + "': list item '" + items[i] + "' contains ';' and cannot be written as CSV");
    }
    if (i) out.push_back(';');
    out += items[i];
  }
  return out;
}

}  // namespace

BaseFormat parse_base_format(std::string_view name) {
  if (name == "json") return BaseFormat::kJson;
  if (name == "csv") return BaseFormat::kCsv;
  throw Error(ErrorKind::kUnsupportedFormat, "unknown DL base format '" + std::string(name) + "'");
}

DlBase::DlBase(std::vector<DataLeaf> leaves) : leaves_(std::move(leaves)) {
  std::set<std::string_view> seen;
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    validate(leaves_[i], "record " + std::to_string(i));
    if (!seen.insert(leaves_[i].id).second) {
      throw Error(ErrorKind::kDuplicateId, leaves_[i].id);
    }
  }
}

const DataLeaf* DlBase::find(std::string_view id) const {
  auto it = std::find_if(leaves_.begin(), leaves_.end(), [&](const DataLeaf& l) { return l.id == id; });
  return it == leaves_.end() ? nullptr : &*it;
}

DlBase load_dl_base(std::string_view bytes, BaseFormat format) {
  check_utf8(bytes);
  bytes = strip_bom(bytes);
  return DlBase(format == BaseFormat::kJson ? parse_json(bytes) : parse_csv(bytes));
}

DlBase load_dl_base(std::istream& in, BaseFormat format) {
  std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw Error(ErrorKind::kIoError, "read failed");
  return load_dl_base(std::string_view(bytes), format);
}

DlBase load_dl_base_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoError, "cannot open '" + path + "'");
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  return load_dl_base(in, csv ? BaseFormat::kCsv : BaseFormat::kJson);
}

std::string serialize_dl_base(const DlBase& base, BaseFormat format) {
  if (format == BaseFormat::kJson) {
    ordered_json arr = ordered_json::array();
    for (const auto& l : base.leaves()) {
      ordered_json rec;
      rec["id"] = l.id;
      rec["name"] = l.name;
      rec["summary"] = l.summary;
      rec["variables"] = l.variables;
      rec["provenance"] = l.provenance;
      rec["tags"] = l.tags;
      arr.push_back(std::move(rec));
    }
    return arr.dump(2) + "\n";
  }
  std::string out = "id,name,summary,variables,provenance,tags\n";
  for (const auto& l : base.leaves()) {
    out += csv_quote(l.id) + ',' + csv_quote(l.name) + ',' + csv_quote(l.summary) + ',' +
           csv_quote(join_list(l.variables, l.id)) + ',' + csv_quote(l.provenance) + ',' +
           csv_quote(join_list(l.tags, l.id)) + '\n';
  }
  return out;
}

TokenList leaf_tokens(const DataLeaf& leaf) {
  TokenList out = tokenize(leaf.name);
  auto append = [&](std::string_view s) {
    auto t = tokenize(s);
    out.insert(out.end(), std::make_move_iterator(t.begin()), std::make_move_iterator(t.end()));
  };
  append(leaf.summary);
  for (const auto& v : leaf.variables) append(v);
  return out;
}

std::vector<CollectedLeaf> collect(const DlBase& base, std::span<const FcVector> fc_vectors,
                                   const VectorSpace& space, double delta, const Metric& metric) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "delta must lie in [0, 1]");
  }
  std::vector<const FcVector*> fcs;
  for (const auto& fc : fc_vectors) fcs.push_back(&fc);
  std::sort(fcs.begin(), fcs.end(), [](const FcVector* a, const FcVector* b) { return a->first < b->first; });

  std::vector<CollectedLeaf> out;
  for (const auto& leaf : base.leaves()) {
    const TermVector v = space.embed(leaf_tokens(leaf));
    const FcVector* nearest = nullptr;
    double best = 0.0;
    for (const auto* fc : fcs) {
      double d = metric(v, fc->second);
      if (nearest == nullptr || d < best) {
        nearest = fc;
        best = d;
      }
    }
    if (nearest != nullptr && best < delta) out.push_back({leaf.id, nearest->first, best});
  }
  std::sort(out.begin(), out.end(),
            [](const CollectedLeaf& a, const CollectedLeaf& b) { return a.leaf_id < b.leaf_id; });
  return out;
}

}  // namespace fcdl
