#include "semcorpus/keyword_network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "semcorpus/common.hpp"
#include "semcorpus/kernels.hpp"

namespace semcorpus {

std::optional<std::uint32_t> SemanticNetwork::index_of(const std::string& keyword) const {
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), keyword,
                                   [](const KeywordNode& n, const std::string& k) { return n.keyword < k; });
  if (it == nodes.end() || it->keyword != keyword) return std::nullopt;
  return static_cast<std::uint32_t>(it - nodes.begin());
}

std::size_t SemanticNetwork::community_count() const {
  std::size_t k = 0;
  for (const auto& n : nodes)
    if (n.community) k = std::max<std::size_t>(k, *n.community + 1);
  return k;
}

SemanticNetwork project_keyword_network(const Corpus& corpus) {
  std::set<std::string> vocabulary;
  for (const auto& a : corpus.articles()) vocabulary.insert(a.keywords.begin(), a.keywords.end());

  SemanticNetwork net;
  for (const auto& k : vocabulary) net.nodes.push_back({k, 0, 0, std::nullopt});

  std::vector<std::vector<std::uint32_t>> sets;
  for (const auto& a : corpus.articles()) {
    std::vector<std::uint32_t> ids;
    for (const auto& k : a.keywords) {
      const auto i = *net.index_of(k);
      ++net.nodes[i].frequency;
      ids.push_back(i);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.size() >= 2) sets.push_back(std::move(ids));
  }
  if (sets.empty()) throw InputError("projection is empty: no article declares two or more keywords");

  for (const auto& pc : kernels::pair_counts(sets, net.nodes.size())) {
    KeywordEdge e;
    e.source = pc.first;
    e.target = pc.second;
    e.observed = pc.count;
    net.edges.push_back(e);
    ++net.nodes[pc.first].degree;
    ++net.nodes[pc.second].degree;
  }
  return net;
}

SemanticNetwork edge_statistics(SemanticNetwork net) {
  std::vector<double> marginal(net.nodes.size(), 0.0);
  double total = 0.0;
  for (const auto& e : net.edges) {
    marginal[e.source] += static_cast<double>(e.observed);
    marginal[e.target] += static_cast<double>(e.observed);
    total += 2.0 * static_cast<double>(e.observed);
  }
  for (auto& e : net.edges) {
    const double wi = marginal[e.source];
    const double wj = marginal[e.target];
    e.source_marginal = wi;
    e.target_marginal = wj;
    e.total_weight = total;
    e.expected = 0.0;
    e.modal_weight.reset();
    if (total - wi <= 0.0 || total - wj <= 0.0) continue;  // one node carries all the weight
    const double p_ij = wi * wj / (total * (total - wi));
    const double p_ji = wi * wj / (total * (total - wj));
    const double p_union = p_ij + p_ji - p_ij * p_ji;
    e.expected = total / 2.0 * p_union;
    if (e.expected > 0.0) e.modal_weight = static_cast<double>(e.observed) / std::sqrt(e.expected);
  }
  net.statistics_computed = true;
  return net;
}

WeightedGraph modal_weight_graph(const SemanticNetwork& net) {
  WeightedGraph g;
  g.node_count = net.nodes.size();
  for (const auto& e : net.edges)
    if (e.modal_weight) g.edges.push_back({e.source, e.target, *e.modal_weight});
  return g;
}

SemanticNetwork detect_communities(SemanticNetwork net, std::uint64_t seed) {
  if (net.nodes.empty() || net.edges.empty()) throw InputError("detect_communities: empty network");
  if (!net.statistics_computed) throw InputError("detect_communities: edge statistics not computed");
  // keywords without any modal-weight edge stay unassigned
  const auto full = modal_weight_graph(net);
  std::vector<std::uint32_t> compact(net.nodes.size(), UINT32_MAX);
  std::vector<std::uint32_t> original;
  for (const auto& e : full.edges)
    for (const auto v : {e.u, e.v})
      if (compact[v] == UINT32_MAX) compact[v] = 0;
  for (std::uint32_t i = 0; i < net.nodes.size(); ++i)
    if (compact[i] != UINT32_MAX) {
      compact[i] = static_cast<std::uint32_t>(original.size());
      original.push_back(i);
    }
  if (original.empty()) throw InputError("detect_communities: no edge has a defined modal weight");
  WeightedGraph g;
  g.node_count = original.size();
  for (const auto& e : full.edges) g.edges.push_back({compact[e.u], compact[e.v], e.weight});
  const auto result = louvain(g, seed);
  for (auto& n : net.nodes) n.community.reset();
  for (std::size_t k = 0; k < original.size(); ++k) net.nodes[original[k]].community = result.community[k];
  net.modularity = result.modularity;
  return net;
}

namespace {

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

std::vector<std::string> nearest_keywords(const SemanticNetwork& net, const std::string& query, std::size_t limit) {
  std::vector<std::pair<std::size_t, std::string>> scored;
  for (const auto& n : net.nodes) scored.emplace_back(edit_distance(query, n.keyword), n.keyword);
  std::sort(scored.begin(), scored.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < scored.size() && i < limit; ++i) out.push_back(scored[i].second);
  return out;
}

SemanticField semantic_field(const SemanticNetwork& net, const std::string& center) {
  const auto idx = net.index_of(center);
  if (!idx) {
    std::string msg = "unknown keyword '" + center + "'; closest:";
    for (const auto& k : nearest_keywords(net, center)) msg += " " + k;
    throw NotFound(msg);
  }
  SemanticField field;
  field.center = center;
  for (const auto& e : net.edges) {
    if (!e.modal_weight || !(*e.modal_weight > 0.0)) continue;
    const std::uint32_t other = e.source == *idx ? e.target : e.target == *idx ? e.source : UINT32_MAX;
    if (other == UINT32_MAX) continue;
    field.neighbors.push_back({net.nodes[other].keyword, 1.0 / *e.modal_weight, 0.0, net.nodes[other].community});
  }
  if (field.neighbors.empty()) {
    field.notice = "keyword '" + center + "' has no neighbor with a defined modal weight";
    return field;
  }

  // angular sectors: one per community, ordered by id, sized by member count
  std::map<std::int64_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < field.neighbors.size(); ++i) {
    const auto& c = field.neighbors[i].community;
    groups[c ? static_cast<std::int64_t>(*c) : -1].push_back(i);
  }
  const double total = static_cast<double>(field.neighbors.size());
  double start = 0.0;
  for (auto& [_, members] : groups) {
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      const auto& x = field.neighbors[a];
      const auto& y = field.neighbors[b];
      return x.distance != y.distance ? x.distance < y.distance : x.keyword < y.keyword;
    });
    const double width = 2.0 * std::numbers::pi * static_cast<double>(members.size()) / total;
    for (std::size_t k = 0; k < members.size(); ++k)
      field.neighbors[members[k]].angle = start + width * (static_cast<double>(k) + 0.5) / static_cast<double>(members.size());
    start += width;
  }
  std::sort(field.neighbors.begin(), field.neighbors.end(), [](const FieldEntry& x, const FieldEntry& y) {
    return x.distance != y.distance ? x.distance < y.distance : x.keyword < y.keyword;
  });
  return field;
}

Classification classify_articles_by_keywords(const Corpus& corpus, const SemanticNetwork& net,
                                             const std::map<std::uint32_t, std::string>& labels) {
  const std::size_t k = net.community_count();
  if (k == 0) throw InputError("classify_articles_by_keywords: communities not detected");
  Classification c;
  c.method = "keywords";
  for (std::uint32_t i = 0; i < k; ++i) {
    const auto it = labels.find(i);
    if (it != labels.end()) {
      c.categories.push_back(it->second);
      continue;
    }
    // default label: the most frequent keyword of the community
    const KeywordNode* top = nullptr;
    for (const auto& n : net.nodes)
      if (n.community == i && (!top || n.frequency > top->frequency)) top = &n;
    c.categories.push_back(std::to_string(i) + ":" + (top ? top->keyword : std::string{}));
  }
  c.shares = Matrix(corpus.articles().size(), k);
  for (std::size_t r = 0; r < corpus.articles().size(); ++r) {
    const auto& a = corpus.articles()[r];
    std::vector<double> tally(k, 0.0);
    for (const auto& kw : a.keywords) {
      const auto idx = net.index_of(kw);
      if (idx && net.nodes[*idx].community) tally[*net.nodes[*idx].community] += 1.0;
    }
    c.article_ids.push_back(a.id);
    c.unclassified.push_back(!fill_share_row(c.shares.row(r), tally));
  }
  return c;
}

nlohmann::json to_json(const SemanticNetwork& net) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : net.nodes)
    nodes.push_back({{"keyword", n.keyword},
                     {"frequency", n.frequency},
                     {"degree", n.degree},
                     {"community", n.community ? nlohmann::json(*n.community) : nlohmann::json()}});
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : net.edges)
    edges.push_back({{"source", net.nodes[e.source].keyword},
                     {"target", net.nodes[e.target].keyword},
                     {"w_obs", e.observed},
                     {"w_e", e.expected},
                     {"mw", e.modal_weight ? nlohmann::json(*e.modal_weight) : nlohmann::json()}});
  return {{"nodes", nodes},
          {"edges", edges},
          {"modularity", net.modularity ? nlohmann::json(*net.modularity) : nlohmann::json()}};
}

SemanticNetwork semantic_network_from_json(const nlohmann::json& j) {
  SemanticNetwork net;
  for (const auto& n : j.at("nodes")) {
    KeywordNode node;
    node.keyword = n.at("keyword").get<std::string>();
    node.frequency = n.at("frequency").get<std::size_t>();
    node.degree = n.at("degree").get<std::size_t>();
    if (!n.at("community").is_null()) node.community = n.at("community").get<std::uint32_t>();
    net.nodes.push_back(std::move(node));
  }
  if (!std::is_sorted(net.nodes.begin(), net.nodes.end(),
                      [](const KeywordNode& a, const KeywordNode& b) { return a.keyword < b.keyword; }))
    throw InputError("network export: nodes not sorted by keyword");
  std::vector<double> marginal(net.nodes.size(), 0.0);
  double total = 0.0;
  for (const auto& e : j.at("edges")) {
    KeywordEdge edge;
    const auto s = net.index_of(e.at("source").get<std::string>());
    const auto t = net.index_of(e.at("target").get<std::string>());
    if (!s || !t) throw InputError("network export: edge endpoint missing from nodes");
    edge.source = std::min(*s, *t);
    edge.target = std::max(*s, *t);
    edge.observed = e.at("w_obs").get<std::size_t>();
    edge.expected = e.at("w_e").get<double>();
    if (!e.at("mw").is_null()) edge.modal_weight = e.at("mw").get<double>();
    marginal[edge.source] += static_cast<double>(edge.observed);
    marginal[edge.target] += static_cast<double>(edge.observed);
    total += 2.0 * static_cast<double>(edge.observed);
    net.edges.push_back(edge);
  }
  for (auto& e : net.edges) {
    e.source_marginal = marginal[e.source];
    e.target_marginal = marginal[e.target];
    e.total_weight = total;
  }
  net.statistics_computed = true;
  if (!j.at("modularity").is_null()) net.modularity = j.at("modularity").get<double>();
  return net;
}

nlohmann::json to_json(const SemanticField& f) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& n : f.neighbors)
    out.push_back({{"keyword", n.keyword},
                   {"distance", n.distance},
                   {"angle_radians", n.angle},
                   {"community", n.community ? nlohmann::json(*n.community) : nlohmann::json()}});
  return out;
}

}  // namespace semcorpus
