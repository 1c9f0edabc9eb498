#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "semcorpus/classification.hpp"
#include "semcorpus/corpus.hpp"
#include "semcorpus/graph.hpp"

namespace semcorpus {

struct KeywordNode {
  std::string keyword;
  std::size_t frequency = 0;  // articles declaring the keyword
  std::size_t degree = 0;     // incident edges in the projection
  std::optional<std::uint32_t> community;
};

/// Observed co-occurrence plus the expected/modal weights derived from the
/// endpoint marginals. Stats are symmetric in (source, target).
struct KeywordEdge {
  std::uint32_t source;  // index into nodes, source < target
  std::uint32_t target;
  std::size_t observed = 0;
  double source_marginal = 0.0;  // weighted degree of source
  double target_marginal = 0.0;
  double total_weight = 0.0;  // twice the summed observed weight
  double expected = 0.0;
  std::optional<double> modal_weight;  // unset when the edge is degenerate
};

struct SemanticNetwork {
  std::vector<KeywordNode> nodes;  // sorted by keyword
  std::vector<KeywordEdge> edges;  // sorted by (source, target)
  std::optional<double> modularity;
  bool statistics_computed = false;

  std::optional<std::uint32_t> index_of(const std::string& keyword) const;
  std::size_t community_count() const;
};

/// Keyword x keyword projection of the article/keyword bipartite graph.
SemanticNetwork project_keyword_network(const Corpus& corpus);

/// Directed link probabilities, their union, expected and modal weights.
SemanticNetwork edge_statistics(SemanticNetwork network);

/// Seeded Louvain over modal-weight edges.
SemanticNetwork detect_communities(SemanticNetwork network, std::uint64_t seed);

struct FieldEntry {
  std::string keyword;
  double distance = 0.0;
  double angle = 0.0;  // radians in [0, 2pi)
  std::optional<std::uint32_t> community;
};

struct SemanticField {
  std::string center;
  std::vector<FieldEntry> neighbors;  // ascending distance
  std::optional<std::string> notice;
};

/// Radial layout of a keyword's neighbors at distance 1/mw. Unknown keywords
/// raise NotFound carrying the closest lexical matches.
SemanticField semantic_field(const SemanticNetwork& network, const std::string& center);

/// Up to `limit` keywords closest to `query` by edit distance.
std::vector<std::string> nearest_keywords(const SemanticNetwork& network, const std::string& query,
                                          std::size_t limit = 5);

/// Share of an article's declared keywords falling in each community.
Classification classify_articles_by_keywords(const Corpus& corpus, const SemanticNetwork& network,
                                             const std::map<std::uint32_t, std::string>& labels = {});

nlohmann::json to_json(const SemanticNetwork& network);
SemanticNetwork semantic_network_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SemanticField& field);

/// Exposed for tests: the undirected-graph view handed to Louvain.
WeightedGraph modal_weight_graph(const SemanticNetwork& network);

}  // namespace semcorpus
