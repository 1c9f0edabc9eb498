#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

#include "semcorpus/common.hpp"
#include "semcorpus/graph.hpp"

namespace semcorpus {
namespace {

/// Graph at one level of the hierarchy. loop[i] is the internal weight of
/// aggregate node i counted in both directions (the A_ii term).
struct Level {
  std::vector<std::size_t> offset;
  std::vector<std::uint32_t> neighbor;
  std::vector<double> weight;
  std::vector<double> loop;
  std::vector<double> strength;
  double total = 0.0;  // 2m

  std::size_t size() const { return loop.size(); }
};

Level build_level(std::size_t n, const std::vector<WeightedEdge>& edges, std::vector<double> loop) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> merged;
  for (const auto& e : edges) {
    if (e.weight < 0.0) throw InputError("louvain: negative edge weight");
    if (e.u == e.v) throw InputError("louvain: self loop in input graph");
    if (e.u >= n || e.v >= n) throw InputError("louvain: edge endpoint out of range");
    merged[{std::min(e.u, e.v), std::max(e.u, e.v)}] += e.weight;
  }
  Level lv;
  lv.loop = std::move(loop);
  lv.loop.resize(n, 0.0);
  std::vector<std::size_t> deg(n, 0);
  for (const auto& [key, w] : merged) {
    ++deg[key.first];
    ++deg[key.second];
  }
  lv.offset.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) lv.offset[i + 1] = lv.offset[i] + deg[i];
  lv.neighbor.resize(lv.offset[n]);
  lv.weight.resize(lv.offset[n]);
  std::vector<std::size_t> fill(lv.offset.begin(), lv.offset.end() - 1);
  for (const auto& [key, w] : merged) {
    lv.neighbor[fill[key.first]] = key.second;
    lv.weight[fill[key.first]++] = w;
    lv.neighbor[fill[key.second]] = key.first;
    lv.weight[fill[key.second]++] = w;
  }
  lv.strength.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = lv.loop[i];
    for (std::size_t k = lv.offset[i]; k < lv.offset[i + 1]; ++k) s += lv.weight[k];
    lv.strength[i] = s;
    lv.total += s;
  }
  return lv;
}

/// Local moving phase. Returns true if any node changed community.
bool move_nodes(const Level& lv, std::vector<std::uint32_t>& n2c, Rng& rng) {
  const std::size_t n = lv.size();
  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[n2c[i]] += lv.strength[i];

  std::vector<double> link(n, -1.0);  // weight from the current node to each community
  std::vector<std::uint32_t> touched;
  std::vector<std::uint32_t> ties;
  bool any_move = false;
  bool improved = true;
  std::size_t passes = 0;
  while (improved && passes++ < 1000) {
    improved = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t own = n2c[i];
      const double ki = lv.strength[i];
      touched.clear();
      link[own] = 0.0;
      touched.push_back(own);
      for (std::size_t k = lv.offset[i]; k < lv.offset[i + 1]; ++k) {
        const auto c = n2c[lv.neighbor[k]];
        if (link[c] < 0.0) {
          link[c] = 0.0;
          touched.push_back(c);
        }
        link[c] += lv.weight[k];
      }
      tot[own] -= ki;

      double best = -std::numeric_limits<double>::infinity();
      ties.clear();
      for (const auto c : touched) {
        const double gain = link[c] - tot[c] * ki / lv.total;
        if (gain > best) {
          best = gain;
          ties.assign(1, c);
        } else if (gain == best) {
          ties.push_back(c);
        }
      }
      std::uint32_t target = own;
      if (std::find(ties.begin(), ties.end(), own) == ties.end()) {
        std::sort(ties.begin(), ties.end());
        target = ties.size() == 1 ? ties[0] : ties[rng.below(ties.size())];
      }
      tot[target] += ki;
      if (target != own) {
        n2c[i] = target;
        improved = true;
        any_move = true;
      }
      for (const auto c : touched) link[c] = -1.0;
    }
  }
  return any_move;
}

/// Renumbers ids to 0..k-1 in order of first appearance.
std::size_t renumber(std::vector<std::uint32_t>& ids) {
  std::vector<std::uint32_t> map(ids.size() + 1, std::numeric_limits<std::uint32_t>::max());
  std::uint32_t next = 0;
  for (auto& c : ids) {
    if (map[c] == std::numeric_limits<std::uint32_t>::max()) map[c] = next++;
    c = map[c];
  }
  return next;
}

}  // namespace

double modularity(const WeightedGraph& g, const std::vector<std::uint32_t>& community) {
  if (community.size() != g.node_count) throw InputError("modularity: partition size mismatch");
  const std::size_t k = community.empty() ? 0 : *std::max_element(community.begin(), community.end()) + 1;
  std::vector<double> in(k, 0.0), tot(k, 0.0);
  double two_m = 0.0;
  for (const auto& e : g.edges) {
    two_m += 2.0 * e.weight;
    tot[community[e.u]] += e.weight;
    tot[community[e.v]] += e.weight;
    if (community[e.u] == community[e.v]) in[community[e.u]] += 2.0 * e.weight;
  }
  if (!(two_m > 0.0)) throw InputError("modularity: graph has no weight");
  double q = 0.0;
  for (std::size_t c = 0; c < k; ++c) q += in[c] / two_m - (tot[c] / two_m) * (tot[c] / two_m);
  return q;
}

LouvainResult louvain(const WeightedGraph& g, std::uint64_t seed) {
  if (g.node_count == 0) throw InputError("louvain: empty network");
  Rng rng(seed);
  Level lv = build_level(g.node_count, g.edges, {});
  if (!(lv.total > 0.0)) throw InputError("louvain: network has no edges");

  std::vector<std::uint32_t> membership(g.node_count);
  std::iota(membership.begin(), membership.end(), 0u);
  LouvainResult result;

  while (true) {
    std::vector<std::uint32_t> n2c(lv.size());
    std::iota(n2c.begin(), n2c.end(), 0u);
    const bool moved = move_nodes(lv, n2c, rng);
    if (!moved) break;
    ++result.levels;
    const std::size_t k = renumber(n2c);
    for (auto& m : membership) m = n2c[m];

    std::vector<WeightedEdge> edges;
    std::vector<double> loop(k, 0.0);
    for (std::size_t i = 0; i < lv.size(); ++i) {
      loop[n2c[i]] += lv.loop[i];
      for (std::size_t e = lv.offset[i]; e < lv.offset[i + 1]; ++e) {
        const auto j = lv.neighbor[e];
        if (j < i) continue;
        if (n2c[i] == n2c[j])
          loop[n2c[i]] += 2.0 * lv.weight[e];
        else
          edges.push_back({n2c[i], n2c[j], lv.weight[e]});
      }
    }
    if (k == lv.size()) break;
    lv = build_level(k, edges, std::move(loop));
  }

  result.community_count = renumber(membership);
  result.community = std::move(membership);
  result.modularity = modularity(g, result.community);
  return result;
}

}  // namespace semcorpus
