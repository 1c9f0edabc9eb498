#pragma once

#include <cstdint>
#include <vector>

namespace semcorpus {

struct WeightedEdge {
  std::uint32_t u;
  std::uint32_t v;
  double weight;
};

/// Undirected weighted graph over nodes 0..node_count-1. Parallel edges are
/// summed by the algorithms that consume it; self loops are not allowed.
struct WeightedGraph {
  std::size_t node_count = 0;
  std::vector<WeightedEdge> edges;
};

/// Newman-Girvan modularity of a hard partition (community id per node).
/// Throws if the graph carries no weight.
double modularity(const WeightedGraph& g, const std::vector<std::uint32_t>& community);

struct LouvainResult {
  std::vector<std::uint32_t> community;  // contiguous ids, numbered by first node
  std::size_t community_count = 0;
  double modularity = 0.0;
  std::size_t levels = 0;
};

/// Multi-level greedy modularity maximisation (Blondel et al.). Nodes are
/// visited in index order; the seed only breaks exact gain ties, so the
/// result is a pure function of (graph, seed).
LouvainResult louvain(const WeightedGraph& g, std::uint64_t seed);

}  // namespace semcorpus
