#include "semcorpus/citation_semantics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

#include "semcorpus/common.hpp"
#include "semcorpus/csv.hpp"
#include "semcorpus/kernels.hpp"
#include "semcorpus/text.hpp"

namespace semcorpus {

// --- neighborhood ------------------------------------------------------------

std::size_t Neighborhood::count(int depth) const {
  const auto it = by_depth.find(depth);
  return it == by_depth.end() ? 0 : it->second.size();
}

std::vector<std::string> Neighborhood::around(const std::string& seed_id, const Corpus& corpus, int max_hops) const {
  std::map<std::string, int> dist{{seed_id, 0}};
  std::deque<std::string> queue{seed_id};
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    if (dist[u] == max_hops) continue;
    const auto it = adjacency.find(u);
    if (it == adjacency.end()) continue;
    for (const auto& v : it->second)
      if (dist.emplace(v, dist[u] + 1).second) queue.push_back(v);
  }
  std::vector<std::string> out;
  for (const auto& [id, _] : dist)
    if (!corpus.is_seed(id)) out.push_back(id);
  return out;
}

Neighborhood build_neighborhood(const Corpus& corpus) {
  if (corpus.citations().empty()) throw InputError("neighborhood empty: corpus has no citation records");
  Neighborhood n;
  for (const auto& c : corpus.citations()) {
    n.by_depth[c.depth].push_back(c);
    n.adjacency[c.citing_id].push_back(c.cited_id);
    n.adjacency[c.cited_id].push_back(c.citing_id);
    if (!c.abstract)
      n.missing_abstract.push_back(c.citing_id + "->" + c.cited_id);
    else if (!corpus.is_seed(c.citing_id))
      n.abstracts.emplace(c.citing_id, *c.abstract);  // first abstract seen wins
  }
  for (auto& [_, v] : n.adjacency) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  // multi-source BFS from every seed article
  std::deque<std::string> queue;
  for (const auto& a : corpus.articles()) {
    n.hops[a.id] = 0;
    queue.push_back(a.id);
  }
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    const auto it = n.adjacency.find(u);
    if (it == n.adjacency.end()) continue;
    const int d = n.hops[u];
    for (const auto& v : it->second)
      if (n.hops.emplace(v, d + 1).second) queue.push_back(v);
  }
  for (const auto& c : corpus.citations()) {
    const int computed = std::max(n.hops.at(c.citing_id), n.hops.at(c.cited_id));
    if (computed != c.depth)
      n.depth_mismatches.push_back(c.citing_id + "->" + c.cited_id + " declared " + std::to_string(c.depth) +
                                   " computed " + std::to_string(computed));
  }
  return n;
}

// --- relevance ---------------------------------------------------------------

void RelevanceConfig::validate() const {
  if (ngram_max < 1) throw InputError("ngram_max must be >= 1");
  if (n_k < 1) throw InputError("N_k must be >= 1");
  if (!(theta_w > 0.0)) throw InputError("theta_w must be > 0");
  if (k_max < 1) throw InputError("k_max must be >= 1");
}

namespace {

bool keep_token(const std::string& t, const RelevanceConfig& config) {
  if (t.size() < 2) return false;
  if (std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; })) return false;
  for (const auto& lang : config.stopword_languages)
    if (text::is_stopword(t, lang)) return false;
  return true;
}

}  // namespace

std::map<std::string, std::size_t> ngram_bag(const std::string& body, const RelevanceConfig& config) {
  std::map<std::string, std::size_t> bag;
  std::vector<std::string> run;
  auto flush = [&] {
    for (std::size_t i = 0; i < run.size(); ++i) {
      std::string gram;
      for (std::size_t len = 1; len <= config.ngram_max && i + len <= run.size(); ++len) {
        if (len > 1) gram += ' ';
        gram += run[i + len - 1];
        ++bag[gram];
      }
    }
    run.clear();
  };
  for (auto& tok : text::tokenize(body)) {
    if (!keep_token(tok, config)) {
      flush();  // boundary markers and stop-words split runs
      continue;
    }
    run.push_back(std::move(tok));
  }
  flush();
  return bag;
}

RelevanceResult extract_relevant_keywords(const std::vector<std::string>& abstracts, const RelevanceConfig& config) {
  config.validate();
  if (abstracts.empty()) throw InputError("extract_relevant_keywords: no abstracts");

  struct Acc {
    double total = 0.0;
    double sum_sq = 0.0;
    std::size_t df = 0;
  };
  std::map<std::string, Acc> acc;
  std::size_t docs = 0;
  for (const auto& a : abstracts) {
    const auto bag = ngram_bag(a, config);
    if (bag.empty()) continue;
    ++docs;
    for (const auto& [gram, count] : bag) {
      auto& x = acc[gram];
      const double c = static_cast<double>(count);
      x.total += c;
      x.sum_sq += c * c;
      ++x.df;
    }
  }
  if (docs == 0) throw InputError("extract_relevant_keywords: no abstract holds a token after cleaning");

  RelevanceResult result;
  result.keywords.reserve(acc.size());
  for (const auto& [gram, x] : acc) {
    // sum_d (O_d - E)^2 / E with E = total / docs, expanded over nonzero O_d
    const double expected = x.total / static_cast<double>(docs);
    const double chi2 = std::max(0.0, x.sum_sq / expected - x.total);
    result.keywords.push_back({gram, chi2, x.df});
  }
  std::sort(result.keywords.begin(), result.keywords.end(), [](const RelevantKeyword& a, const RelevantKeyword& b) {
    if (a.relevance != b.relevance) return a.relevance > b.relevance;
    if (a.document_frequency != b.document_frequency) return a.document_frequency > b.document_frequency;
    return a.ngram < b.ngram;
  });
  if (result.keywords.size() < config.n_k)
    result.notice = "only " + std::to_string(result.keywords.size()) + " candidates for N_k = " +
                    std::to_string(config.n_k) + "; all kept";
  else
    result.keywords.resize(config.n_k);
  return result;
}

// --- co-occurrence -----------------------------------------------------------

CooccurrenceNetwork build_cooccurrence_network(const std::vector<RelevantKeyword>& keywords,
                                               const std::vector<std::string>& abstracts,
                                               const RelevanceConfig& config) {
  CooccurrenceNetwork net;
  for (const auto& k : keywords) net.labels.push_back(k.ngram);
  std::sort(net.labels.begin(), net.labels.end());
  net.labels.erase(std::unique(net.labels.begin(), net.labels.end()), net.labels.end());
  std::map<std::string, std::uint32_t> index;
  for (std::uint32_t i = 0; i < net.labels.size(); ++i) index.emplace(net.labels[i], i);

  std::vector<std::vector<std::uint32_t>> sets;
  for (const auto& a : abstracts) {
    std::vector<std::uint32_t> ids;
    for (const auto& [gram, _] : ngram_bag(a, config)) {
      const auto it = index.find(gram);
      if (it != index.end()) ids.push_back(it->second);
    }
    if (ids.size() >= 2) sets.push_back(std::move(ids));
  }
  net.graph.node_count = net.labels.size();
  for (const auto& pc : kernels::pair_counts(sets, net.labels.size()))
    net.graph.edges.push_back({pc.first, pc.second, static_cast<double>(pc.count)});
  return net;
}

// --- filtering ---------------------------------------------------------------

CooccurrenceNetwork apply_filter(const CooccurrenceNetwork& network, const FilterPoint& point) {
  const std::size_t n = network.labels.size();
  std::vector<std::set<std::uint32_t>> adj(n);
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> weight;
  for (const auto& e : network.graph.edges) {
    if (e.weight < point.theta_w) continue;
    adj[e.u].insert(e.v);
    adj[e.v].insert(e.u);
    weight[{std::min(e.u, e.v), std::max(e.u, e.v)}] += e.weight;
  }
  // remove the highest-degree node (lexicographic tie-break) until the cap holds
  auto order = [&](std::uint32_t a, std::uint32_t b) {
    if (adj[a].size() != adj[b].size()) return adj[a].size() > adj[b].size();
    return network.labels[a] < network.labels[b];
  };
  std::set<std::uint32_t, decltype(order)> by_degree(order);
  for (std::uint32_t i = 0; i < n; ++i)
    if (!adj[i].empty()) by_degree.insert(i);
  std::vector<bool> removed(n, false);
  while (!by_degree.empty() && adj[*by_degree.begin()].size() > point.k_max) {
    const auto top = *by_degree.begin();
    by_degree.erase(by_degree.begin());
    removed[top] = true;
    for (const auto v : adj[top]) {
      by_degree.erase(v);
      adj[v].erase(top);
      if (!adj[v].empty()) by_degree.insert(v);
    }
    adj[top].clear();
  }

  CooccurrenceNetwork out;
  std::vector<std::uint32_t> remap(n, UINT32_MAX);
  for (std::uint32_t i = 0; i < n; ++i)
    if (!removed[i] && !adj[i].empty()) {
      remap[i] = static_cast<std::uint32_t>(out.labels.size());
      out.labels.push_back(network.labels[i]);
    }
  out.graph.node_count = out.labels.size();
  for (const auto& [key, w] : weight)
    if (remap[key.first] != UINT32_MAX && remap[key.second] != UINT32_MAX && adj[key.first].contains(key.second))
      out.graph.edges.push_back({remap[key.first], remap[key.second], w});
  return out;
}

std::vector<std::size_t> pareto_front(const std::vector<GridOutcome>& outcomes) {
  std::vector<std::size_t> front;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].modularity) continue;
    bool dominated = false;
    for (std::size_t j = 0; j < outcomes.size() && !dominated; ++j) {
      if (j == i || !outcomes[j].modularity) continue;
      const double qi = *outcomes[i].modularity, qj = *outcomes[j].modularity;
      const auto ni = outcomes[i].node_count, nj = outcomes[j].node_count;
      dominated = qj >= qi && nj >= ni && (qj > qi || nj > ni);
    }
    if (!dominated) front.push_back(i);
  }
  return front;
}

std::size_t CitationSemanticNetwork::community_count() const {
  std::size_t k = 0;
  for (const auto c : community) k = std::max<std::size_t>(k, c + 1);
  return k;
}

std::optional<std::uint32_t> CitationSemanticNetwork::community_of(const std::string& ngram) const {
  const auto it = std::lower_bound(labels.begin(), labels.end(), ngram);
  if (it == labels.end() || *it != ngram) return std::nullopt;
  return community[static_cast<std::size_t>(it - labels.begin())];
}

std::vector<std::string> CitationSemanticNetwork::category_labels(const std::map<std::uint32_t, std::string>& user) const {
  const std::size_t k = community_count();
  std::vector<double> strength(labels.size(), 0.0);
  for (const auto& e : edges) {
    strength[e.u] += e.weight;
    strength[e.v] += e.weight;
  }
  std::vector<std::string> out;
  for (std::uint32_t c = 0; c < k; ++c) {
    const auto it = user.find(c);
    if (it != user.end()) {
      out.push_back(it->second);
      continue;
    }
    std::size_t best = labels.size();
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (community[i] == c && (best == labels.size() || strength[i] > strength[best])) best = i;
    out.push_back(std::to_string(c) + ":" + (best < labels.size() ? labels[best] : std::string{}));
  }
  return out;
}

CitationSemanticNetwork filter_and_select(const CooccurrenceNetwork& network, const std::vector<FilterPoint>& grid,
                                          std::uint64_t seed, std::optional<std::size_t> choose) {
  if (grid.empty()) throw InputError("filter_and_select: empty parameter grid");
  for (const auto& p : grid) RelevanceConfig{1, 1, p.theta_w, p.k_max, {}}.validate();

  std::vector<GridOutcome> outcomes(grid.size());
  std::vector<CooccurrenceNetwork> filtered(grid.size());
  std::vector<LouvainResult> partitions(grid.size());
  const auto n = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t gi = 0; gi < n; ++gi) {
    const auto g = static_cast<std::size_t>(gi);
    auto& out = outcomes[g];
    out.point = grid[g];
    filtered[g] = apply_filter(network, grid[g]);
    out.node_count = filtered[g].labels.size();
    out.edge_count = filtered[g].graph.edges.size();
    if (out.edge_count == 0) continue;
    partitions[g] = louvain(filtered[g].graph, seed);
    out.modularity = partitions[g].modularity;
    out.community_count = partitions[g].community_count;
  }

  const auto front = pareto_front(outcomes);
  if (front.empty()) throw InputError("filter_and_select: every grid point yields an empty network");
  for (const auto i : front) outcomes[i].on_front = true;

  std::size_t pick = front.front();
  if (choose) {
    if (*choose >= outcomes.size() || !outcomes[*choose].on_front)
      throw InputError("filter_and_select: chosen grid point is not on the Pareto front");
    pick = *choose;
  } else {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto i : front) {
      const double score = *outcomes[i].modularity * std::log1p(static_cast<double>(outcomes[i].node_count));
      if (score > best) {
        best = score;
        pick = i;
      }
    }
  }

  CitationSemanticNetwork result;
  result.labels = filtered[pick].labels;
  result.edges = filtered[pick].graph.edges;
  result.community = partitions[pick].community;
  result.modularity = partitions[pick].modularity;
  result.selected = grid[pick];
  result.selected_index = pick;
  result.grid = std::move(outcomes);
  return result;
}

// --- classification ------------------------------------------------------------

CitationClassification classify_articles_by_citation(const Corpus& corpus, const Neighborhood& neighborhood,
                                                     const CitationSemanticNetwork& network,
                                                     const RelevanceConfig& config, bool include_depth2,
                                                     const std::map<std::uint32_t, std::string>& labels) {
  const std::size_t k = network.community_count();
  if (k == 0) throw InputError("classify_articles_by_citation: no communities");
  CitationClassification out;
  auto& c = out.classification;
  c.method = "citations";
  c.categories = network.category_labels(labels);
  c.shares = Matrix(corpus.articles().size(), k);

  std::map<std::string, std::map<std::string, std::size_t>> bags;  // cached per neighbor
  for (std::size_t r = 0; r < corpus.articles().size(); ++r) {
    const auto& a = corpus.articles()[r];
    std::vector<double> tally(k, 0.0);
    std::map<std::string, std::size_t> words;
    for (const auto& id : neighborhood.around(a.id, corpus, include_depth2 ? 2 : 1)) {
      const auto abs = neighborhood.abstracts.find(id);
      if (abs == neighborhood.abstracts.end()) continue;
      auto bag = bags.find(id);
      if (bag == bags.end()) bag = bags.emplace(id, ngram_bag(abs->second, config)).first;
      for (const auto& [gram, count] : bag->second) {
        const auto comm = network.community_of(gram);
        if (!comm) continue;
        tally[*comm] += static_cast<double>(count);
        words[gram] += count;
      }
    }
    c.article_ids.push_back(a.id);
    c.unclassified.push_back(!fill_share_row(c.shares.row(r), tally));
    auto& cloud = out.wordclouds[a.id];
    for (const auto& [gram, count] : words) cloud.push_back({gram, count, *network.community_of(gram)});
    std::stable_sort(cloud.begin(), cloud.end(),
                     [](const WordcloudEntry& x, const WordcloudEntry& y) { return x.count > y.count; });
  }
  return out;
}

// --- exports -------------------------------------------------------------------

nlohmann::json to_json(const Neighborhood& n) {
  nlohmann::json depth = nlohmann::json::object();
  for (const auto& [d, recs] : n.by_depth) depth[std::to_string(d)] = recs.size();
  return {{"records_by_depth", depth},
          {"missing_abstract", n.missing_abstract.size()},
          {"depth_mismatches", n.depth_mismatches},
          {"abstracts", n.abstracts.size()}};
}

nlohmann::json to_json(const CitationSemanticNetwork& n) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < n.labels.size(); ++i) nodes.push_back({{"keyword", n.labels[i]}, {"community", n.community[i]}});
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : n.edges)
    edges.push_back({{"source", n.labels[e.u]}, {"target", n.labels[e.v]}, {"weight", e.weight}});
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& g : n.grid)
    grid.push_back({{"theta_w", g.point.theta_w},
                    {"k_max", g.point.k_max},
                    {"node_count", g.node_count},
                    {"edge_count", g.edge_count},
                    {"community_count", g.community_count},
                    {"modularity", g.modularity ? nlohmann::json(*g.modularity) : nlohmann::json()},
                    {"pareto", g.on_front}});
  return {{"nodes", nodes},
          {"edges", edges},
          {"modularity", n.modularity},
          {"communities", n.community_count()},
          {"selected", {{"theta_w", n.selected.theta_w}, {"k_max", n.selected.k_max}, {"index", n.selected_index}}},
          {"grid", grid}};
}

nlohmann::json wordcloud_json(const std::string& article_id, const std::vector<WordcloudEntry>& words) {
  nlohmann::json w = nlohmann::json::array();
  for (const auto& e : words) w.push_back({{"ngram", e.ngram}, {"count", e.count}, {"community", e.community}});
  return {{"article_id", article_id}, {"words", w}};
}

std::string relevant_keywords_csv(const std::vector<RelevantKeyword>& keywords, const CitationSemanticNetwork* network) {
  std::ostringstream out;
  out.precision(17);
  out << "ngram,relevance,document_frequency,community\n";
  for (const auto& k : keywords) {
    out << csv::escape(k.ngram) << ',' << k.relevance << ',' << k.document_frequency << ',';
    if (network)
      if (const auto c = network->community_of(k.ngram)) out << *c;
    out << '\n';
  }
  return out.str();
}

}  // namespace semcorpus
