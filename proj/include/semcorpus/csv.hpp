#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace semcorpus::csv {

/// One parsed record and the 1-based physical line it started on.
struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

/// RFC 4180 reader: quoted fields may contain separators, doubled quotes and
/// newlines. Throws InputError on an unterminated quote.
class Reader {
public:
  explicit Reader(std::istream& in, char sep = ',') : in_(in), sep_(sep) {}
  std::optional<Record> next();

private:
  std::istream& in_;
  char sep_;
  std::size_t line_ = 0;
};

/// Quote a field if it needs it.
std::string escape(const std::string& field, char sep = ',');

}  // namespace semcorpus::csv
