#include "semcorpus/classification.hpp"

#include <cmath>

namespace semcorpus {

std::size_t Classification::classified_count() const {
  std::size_t n = 0;
  for (const bool u : unclassified) n += u ? 0 : 1;
  return n;
}

void Classification::validate(double tolerance) const {
  if (shares.rows() != article_ids.size() || shares.cols() != categories.size() ||
      unclassified.size() != article_ids.size())
    throw InputError("classification '" + method + "': shape mismatch");
  for (std::size_t r = 0; r < shares.rows(); ++r) {
    double s = 0.0;
    for (const double x : shares.row(r)) {
      if (!(x >= 0.0)) throw InputError("classification '" + method + "': negative share for " + article_ids[r]);
      s += x;
    }
    if (std::abs(s - 1.0) > tolerance)
      throw InputError("classification '" + method + "': row " + article_ids[r] + " sums to " + std::to_string(s));
  }
}

bool fill_share_row(std::span<double> row, const std::vector<double>& tally) {
  double total = 0.0;
  for (const double t : tally) total += t;
  if (total > 0.0) {
    for (std::size_t c = 0; c < row.size(); ++c) row[c] = tally[c] / total;
    return true;
  }
  for (auto& x : row) x = 1.0 / static_cast<double>(row.size());
  return false;
}

nlohmann::json to_json(const Classification& c) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < c.shares.rows(); ++r) {
    const auto row = c.shares.row(r);
    rows.push_back({{"article_id", c.article_ids[r]},
                    {"shares", std::vector<double>(row.begin(), row.end())},
                    {"unclassified", static_cast<bool>(c.unclassified[r])}});
  }
  return {{"method", c.method}, {"categories", c.categories}, {"rows", rows}};
}

Classification classification_from_json(const nlohmann::json& j) {
  Classification c;
  c.method = j.at("method").get<std::string>();
  c.categories = j.at("categories").get<std::vector<std::string>>();
  const auto& rows = j.at("rows");
  c.shares = Matrix(rows.size(), c.categories.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    c.article_ids.push_back(rows[r].at("article_id").get<std::string>());
    const auto v = rows[r].at("shares").get<std::vector<double>>();
    if (v.size() != c.categories.size()) throw InputError("classification row width mismatch");
    for (std::size_t k = 0; k < v.size(); ++k) c.shares(r, k) = v[k];
    c.unclassified.push_back(rows[r].at("unclassified").get<bool>());
  }
  return c;
}

}  // namespace semcorpus
