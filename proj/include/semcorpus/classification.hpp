#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "semcorpus/common.hpp"

namespace semcorpus {

/// Articles x categories matrix of membership shares, one per method. Rows
/// are stochastic; rows flagged unclassified hold the uniform vector and are
/// left out of country profiles and comparisons.
struct Classification {
  std::string method;
  std::vector<std::string> article_ids;
  std::vector<std::string> categories;
  Matrix shares;
  std::vector<bool> unclassified;

  std::size_t classified_count() const;
  /// Throws InputError when a row is not a stochastic vector.
  void validate(double tolerance = 1e-9) const;
};

/// Normalizes tallies into a row; an all-zero tally becomes uniform and
/// flags the row. Returns true if the row was classifiable.
bool fill_share_row(std::span<double> row, const std::vector<double>& tally);

nlohmann::json to_json(const Classification& c);
Classification classification_from_json(const nlohmann::json& j);

}  // namespace semcorpus
