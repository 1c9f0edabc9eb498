#include "semcorpus/csv.hpp"

#include "semcorpus/common.hpp"

namespace semcorpus::csv {

std::optional<Record> Reader::next() {
  std::string line;
  if (!std::getline(in_, line)) return std::nullopt;
  ++line_;
  Record rec;
  rec.line = line_;
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  while (true) {
    if (i >= line.size()) {
      if (!quoted) break;
      // quoted field continues on the next physical line
      std::string more;
      if (!std::getline(in_, more))
        throw InputError("unterminated quoted field starting on line " + std::to_string(rec.line));
      ++line_;
      if (!more.empty() && more.back() == '\r') more.pop_back();
      field += '\n';
      line = std::move(more);
      i = 0;
      continue;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == sep_) {
      rec.fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
    ++i;
  }
  rec.fields.push_back(std::move(field));
  return rec;
}

std::string escape(const std::string& field, char sep) {
  if (field.find_first_of(std::string{sep, '"', '\n', '\r'}) == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace semcorpus::csv
