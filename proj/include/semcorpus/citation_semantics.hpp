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

// --- citation neighborhood --------------------------------------------------

/// Depth-2 citation neighborhood of the seed corpus.
struct Neighborhood {
  std::map<int, std::vector<CitationRecord>> by_depth;  // declared depth -> records
  std::vector<std::string> missing_abstract;             // "citing->cited" of records without abstract
  std::map<std::string, int> hops;  // BFS hops from the nearest seed over the undirected citation graph (seeds: 0)
  std::vector<std::string> depth_mismatches;        // records whose declared depth differs from the BFS depth
  std::map<std::string, std::string> abstracts;     // non-seed article id -> abstract
  std::map<std::string, std::vector<std::string>> adjacency;  // undirected, sorted, deduplicated

  std::size_t count(int depth) const;
  /// Non-seed articles within `max_hops` of a seed article, sorted.
  std::vector<std::string> around(const std::string& seed_id, const Corpus& corpus, int max_hops) const;
};

Neighborhood build_neighborhood(const Corpus& corpus);

// --- relevant keywords -------------------------------------------------------

struct RelevanceConfig {
  std::size_t ngram_max = 3;
  std::size_t n_k = 50000;
  double theta_w = 1.0;
  std::size_t k_max = 1000;
  std::vector<std::string> stopword_languages{"en", "fr"};

  void validate() const;
};

struct RelevantKeyword {
  std::string ngram;  // tokens joined by single spaces
  double relevance = 0.0;
  std::size_t document_frequency = 0;
};

struct RelevanceResult {
  std::vector<RelevantKeyword> keywords;  // descending relevance
  std::optional<std::string> notice;
};

/// Per-document n-gram counts after cleaning: lowercase, punctuation and
/// stop-words act as n-gram boundaries, single-character and numeric tokens dropped.
std::map<std::string, std::size_t> ngram_bag(const std::string& text, const RelevanceConfig& config);

/// Chi-squared deviation of each candidate's per-document counts from the
/// uniform distribution over documents holding at least one token.
RelevanceResult extract_relevant_keywords(const std::vector<std::string>& abstracts, const RelevanceConfig& config);

// --- co-occurrence network ---------------------------------------------------

struct CooccurrenceNetwork {
  std::vector<std::string> labels;  // relevant keyword n-grams
  WeightedGraph graph;              // integer weights: abstracts holding both endpoints
};

CooccurrenceNetwork build_cooccurrence_network(const std::vector<RelevantKeyword>& keywords,
                                               const std::vector<std::string>& abstracts,
                                               const RelevanceConfig& config);

// --- filtering and selection -------------------------------------------------

struct FilterPoint {
  double theta_w = 1.0;
  std::size_t k_max = 1;
};

struct GridOutcome {
  FilterPoint point;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::size_t community_count = 0;
  std::optional<double> modularity;  // unset for an empty filtered network
  bool on_front = false;
};

struct CitationSemanticNetwork {
  std::vector<std::string> labels;        // retained keywords, sorted
  std::vector<WeightedEdge> edges;         // over indices into labels
  std::vector<std::uint32_t> community;   // per retained keyword
  double modularity = 0.0;
  FilterPoint selected;
  std::size_t selected_index = 0;
  std::vector<GridOutcome> grid;          // one per grid point, input order

  std::size_t community_count() const;
  std::optional<std::uint32_t> community_of(const std::string& ngram) const;
  std::vector<std::string> category_labels(const std::map<std::uint32_t, std::string>& user = {}) const;
};

/// Applies every grid point (edge threshold, then degree cap), detects
/// communities, and selects a Pareto-optimal point for (modularity, size).
/// `choose` overrides the default scalarised pick; it must index a front point.
CitationSemanticNetwork filter_and_select(const CooccurrenceNetwork& network, const std::vector<FilterPoint>& grid,
                                          std::uint64_t seed, std::optional<std::size_t> choose = std::nullopt);

/// Filtered subgraph for one grid point, before community detection.
CooccurrenceNetwork apply_filter(const CooccurrenceNetwork& network, const FilterPoint& point);

/// Indices of the non-dominated outcomes (both criteria maximised).
std::vector<std::size_t> pareto_front(const std::vector<GridOutcome>& outcomes);

// --- article classification --------------------------------------------------

struct WordcloudEntry {
  std::string ngram;
  std::size_t count = 0;
  std::uint32_t community = 0;
};

struct CitationClassification {
  Classification classification;
  std::map<std::string, std::vector<WordcloudEntry>> wordclouds;  // article id -> words
};

CitationClassification classify_articles_by_citation(const Corpus& corpus, const Neighborhood& neighborhood,
                                                     const CitationSemanticNetwork& network,
                                                     const RelevanceConfig& config, bool include_depth2 = true,
                                                     const std::map<std::uint32_t, std::string>& labels = {});

nlohmann::json to_json(const Neighborhood& n);
nlohmann::json to_json(const CitationSemanticNetwork& n);
nlohmann::json wordcloud_json(const std::string& article_id, const std::vector<WordcloudEntry>& words);
/// CSV `ngram,relevance,document_frequency,community`.
std::string relevant_keywords_csv(const std::vector<RelevantKeyword>& keywords, const CitationSemanticNetwork* network);

}  // namespace semcorpus
