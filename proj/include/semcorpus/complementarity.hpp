#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "semcorpus/classification.hpp"
#include "semcorpus/common.hpp"

namespace semcorpus {

/// Rows of two classifications restricted to articles classified by both,
/// in the order of the first.
struct AlignedPair {
  std::vector<std::string> article_ids;
  Matrix a;
  Matrix b;
  std::size_t only_a = 0;
  std::size_t only_b = 0;
};

AlignedPair align(const Classification& a, const Classification& b);

struct FlowMatrix {
  std::string method_a;
  std::string method_b;
  std::vector<std::string> categories_a;
  std::vector<std::string> categories_b;
  Matrix flows;  // categories_a x categories_b
  std::size_t shared_articles = 0;
  std::vector<std::string> notices;

  double total() const;
};

/// flows(i, j) = sum over shared articles of a(r, i) * b(r, j).
FlowMatrix flow_matrix(const Classification& a, const Classification& b);

struct Aggregates {
  double min = 0.0;
  double max = 0.0;
  double mean_abs = 0.0;
};

/// Mean and standard deviation of each aggregate over null-model draws.
struct NullBand {
  Aggregates mean;
  Aggregates sd;
  std::size_t draws = 0;
};

struct CorrelationReport {
  std::string method_a;
  std::string method_b;
  std::vector<std::string> categories_a;
  std::vector<std::string> categories_b;
  Matrix rho;  // NaN where a column is constant
  Aggregates observed;
  std::size_t undefined = 0;
  NullBand null_lower;  // rho_0: full row shuffle, A and B alternately
  NullBand null_upper;  // rho_+: each matrix against its partially shuffled self, pooled
  std::size_t b = 0;
  double shuffle_fraction = 0.5;
  std::uint64_t seed = 0;
  std::size_t shared_articles = 0;
  std::vector<std::string> notices;
};

/// Aggregates over the defined (non-NaN) entries. Throws if none is defined.
Aggregates aggregate(const Matrix& rho);

CorrelationReport correlation_report(const Classification& a, const Classification& b, std::size_t b_reps,
                                     std::uint64_t seed, double shuffle_fraction = 0.5);

struct ModularityCurve {
  std::string method_a;
  std::string method_b;
  std::vector<double> thresholds;
  std::vector<std::size_t> edges;
  std::vector<std::optional<double>> modularity_a;
  std::vector<std::optional<double>> modularity_b;
  std::vector<std::optional<double>> relative;  // unset when b's modularity <= 0 or the network is empty
};

/// `count` values evenly spaced from the 1st to the 99th percentile of
/// pairwise row distances.
std::vector<double> default_thresholds(const Matrix& points, std::size_t count = 20);

/// Soft modularity of a's memberships on b's distance-threshold network,
/// relative to b's own. Empty `thresholds` selects the defaults.
ModularityCurve modularity_curve(const Classification& a, const Classification& b, std::vector<double> thresholds = {});

nlohmann::json to_json(const FlowMatrix& f);
/// `{nodes: [{method, category, size}], links: [{source, target, value}]}`.
nlohmann::json sankey_json(const FlowMatrix& f);
nlohmann::json to_json(const CorrelationReport& r);
std::string correlation_csv(const CorrelationReport& r);
nlohmann::json to_json(const ModularityCurve& c);

}  // namespace semcorpus
