#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "semcorpus/citation_semantics.hpp"
#include "semcorpus/common.hpp"

using namespace semcorpus;
using fixtures::article;

namespace {

CitationRecord cite(std::string from, std::string to, int depth, std::optional<std::string> abstract = {}) {
  return {std::move(from), std::move(to), depth, std::move(abstract)};
}

RelevanceConfig unigram_config(std::size_t n_k = 1000) {
  RelevanceConfig c;
  c.ngram_max = 1;
  c.n_k = n_k;
  return c;
}

}  // namespace

TEST_CASE("neighborhood of the chain A <- B <- C") {
  const auto corpus = fixtures::corpus({article("A", {"x"})}, {cite("B", "A", 1, "b text"), cite("C", "B", 2, "c text")});
  const auto n = build_neighborhood(corpus);
  CHECK(n.hops.at("A") == 0);
  CHECK(n.hops.at("B") == 1);
  CHECK(n.hops.at("C") == 2);
  CHECK(n.count(1) == 1);
  CHECK(n.count(2) == 1);
  CHECK(n.depth_mismatches.empty());
  CHECK(n.around("A", corpus, 2) == std::vector<std::string>{"B", "C"});
  CHECK(n.around("A", corpus, 1) == std::vector<std::string>{"B"});
}

TEST_CASE("neighborhood flags missing abstracts and declared-depth mismatches") {
  const auto corpus = fixtures::corpus({article("A", {"x"})}, {cite("B", "A", 2), cite("C", "B", 2, "t")});
  const auto n = build_neighborhood(corpus);
  CHECK(n.missing_abstract == std::vector<std::string>{"B->A"});
  CHECK(n.depth_mismatches.size() == 1);
}

TEST_CASE("neighborhood requires citations") {
  CHECK_THROWS_WITH_AS(build_neighborhood(fixtures::corpus({article("A", {"x"})})),
                       doctest::Contains("neighborhood empty"), InputError);
}

TEST_CASE("neighborhood depths on a synthetic 30-edge DAG equal a fixed-point hop oracle") {
  Rng rng(21);
  const std::vector<std::string> seeds = {"s0", "s1", "s2"};
  std::vector<CitationRecord> recs;
  std::set<std::pair<std::string, std::string>> seen;
  // nodes n0..n14 only cite lower-numbered nodes or seeds, so the graph is acyclic
  while (recs.size() < 30) {
    const std::size_t from = rng.below(15);
    const std::size_t pool = from + seeds.size();
    const std::size_t to = rng.below(pool);
    const std::string citing = "n" + std::to_string(from);
    const std::string cited = to < seeds.size() ? seeds[to] : "n" + std::to_string(to - seeds.size());
    if (citing == cited || !seen.emplace(citing, cited).second) continue;
    recs.push_back(cite(citing, cited, 1, "abstract"));
  }
  std::vector<Article> arts;
  for (const auto& s : seeds) arts.push_back(article(s, {"x"}));
  const auto corpus = fixtures::corpus(arts, recs);
  const auto n = build_neighborhood(corpus);

  // oracle: relax dist(v) = min(dist(v), dist(u) + 1) over both edge directions until nothing changes
  std::map<std::string, int> dist;
  for (const auto& s : seeds) dist[s] = 0;
  constexpr int kInf = 1 << 20;
  for (const auto& r : recs) {
    dist.emplace(r.citing_id, kInf);
    dist.emplace(r.cited_id, kInf);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& r : recs)
      for (const auto& [u, v] : {std::pair{r.citing_id, r.cited_id}, std::pair{r.cited_id, r.citing_id}})
        if (dist[u] + 1 < dist[v]) {
          dist[v] = dist[u] + 1;
          changed = true;
        }
  }
  for (const auto& [id, d] : dist) {
    if (d == kInf) {
      CHECK_FALSE(n.hops.contains(id));
    } else {
      CHECK(n.hops.at(id) == d);
    }
  }
}

TEST_CASE("ngram bags respect stop-words, punctuation and ngram_max") {
  RelevanceConfig c;
  c.ngram_max = 2;
  const auto bag = ngram_bag("The urban growth of cities. Urban growth, again!", c);
  CHECK(bag.at("urban") == 2);
  CHECK(bag.at("urban growth") == 2);
  CHECK_FALSE(bag.contains("growth cities"));  // "of" is a stop-word and splits the run
  CHECK_FALSE(bag.contains("cities urban"));   // sentence break
  CHECK_FALSE(bag.contains("the"));
  const auto fr = ngram_bag("La croissance des villes françaises", c);
  CHECK(fr.contains("villes françaises"));
  CHECK_FALSE(fr.contains("des"));
}

TEST_CASE("chi-squared relevance: uniform term scores 0 and ranks last") {
  std::vector<std::string> docs;
  for (int d = 0; d < 10; ++d) docs.push_back("common " + std::string(d < 5 ? "alpha alpha alpha" : "beta"));
  const auto r = extract_relevant_keywords(docs, unigram_config());
  REQUIRE(r.keywords.size() == 3);
  CHECK(r.keywords.back().ngram == "common");
  CHECK(r.keywords.back().relevance == 0.0);
  CHECK(r.keywords.back().document_frequency == 10);
}

TEST_CASE("chi-squared relevance: concentrated term matches the direct formula") {
  std::vector<std::string> docs(10, "filler");
  docs[3] = "filler rare rare rare rare";
  const auto r = extract_relevant_keywords(docs, unigram_config());
  const auto it = std::find_if(r.keywords.begin(), r.keywords.end(), [](const auto& k) { return k.ngram == "rare"; });
  REQUIRE(it != r.keywords.end());
  // brute force: O = (0,0,0,4,0,...), E = 4/10
  const double expected_count = 4.0 / 10.0;
  double chi2 = 0.0;
  for (int d = 0; d < 10; ++d) {
    const double o = d == 3 ? 4.0 : 0.0;
    chi2 += (o - expected_count) * (o - expected_count) / expected_count;
  }
  CHECK(it->relevance == doctest::Approx(chi2).epsilon(1e-12));
  CHECK(r.keywords.front().ngram == "rare");
}

TEST_CASE("relevant keywords: N_k truncation, notice and tie-breaking") {
  std::vector<std::string> docs = {"aa bb cc dd", "aa bb", "ee"};
  const auto all = extract_relevant_keywords(docs, unigram_config(100));
  CHECK(all.notice.has_value());
  CHECK(all.keywords.size() == 5);
  const auto two = extract_relevant_keywords(docs, unigram_config(2));
  CHECK_FALSE(two.notice.has_value());
  CHECK(two.keywords.size() == 2);
  for (std::size_t i = 1; i < all.keywords.size(); ++i) {
    const auto& a = all.keywords[i - 1];
    const auto& b = all.keywords[i];
    CHECK((a.relevance > b.relevance ||
           (a.relevance == b.relevance &&
            (a.document_frequency > b.document_frequency ||
             (a.document_frequency == b.document_frequency && a.ngram < b.ngram)))));
  }
  CHECK_THROWS_AS(extract_relevant_keywords({}, unigram_config()), InputError);
  RelevanceConfig bad;
  bad.ngram_max = 0;
  CHECK_THROWS_AS(extract_relevant_keywords(docs, bad), InputError);
}

TEST_CASE("relevant keywords are invariant to document order") {
  std::vector<std::string> docs = {"urban model city", "city growth city", "remote sensing land cover",
                                   "land use model",   "urban sprawl",      "growth model simulation"};
  const auto a = extract_relevant_keywords(docs, RelevanceConfig{});
  Rng rng(3);
  for (int t = 0; t < 5; ++t) {
    rng.shuffle(docs);
    const auto b = extract_relevant_keywords(docs, RelevanceConfig{});
    REQUIRE(a.keywords.size() == b.keywords.size());
    for (std::size_t i = 0; i < a.keywords.size(); ++i) {
      CHECK(a.keywords[i].ngram == b.keywords[i].ngram);
      CHECK(a.keywords[i].relevance == b.keywords[i].relevance);
    }
  }
}

TEST_CASE("co-occurrence network weights") {
  const auto cfg = unigram_config();
  std::vector<RelevantKeyword> kws = {{"alpha", 1, 1}, {"beta", 1, 1}, {"gamma", 1, 1}};
  const std::vector<std::string> docs = {"alpha beta", "alpha beta", "alpha beta gamma", "gamma"};
  const auto net = build_cooccurrence_network(kws, docs, cfg);
  std::map<std::pair<std::string, std::string>, double> w;
  for (const auto& e : net.graph.edges) w[{net.labels[e.u], net.labels[e.v]}] = e.weight;
  CHECK(w.at({"alpha", "beta"}) == 3.0);
  CHECK(w.at({"alpha", "gamma"}) == 1.0);
  const auto none = build_cooccurrence_network(kws, {"alpha", "beta gamma"}, cfg);
  CHECK(none.graph.edges.size() == 1);  // only beta-gamma
}

TEST_CASE("co-occurrence network on a 15-abstract fixture equals a nested-loop oracle") {
  const std::vector<std::string> vocab = {"land", "urban", "model", "river", "climate", "health", "city", "transport"};
  Rng rng(8);
  std::vector<std::string> docs;
  for (int d = 0; d < 15; ++d) {
    std::string s;
    for (std::size_t k = 0; k < 6; ++k) s += vocab[rng.below(vocab.size())] + " ";
    docs.push_back(s);
  }
  std::vector<RelevantKeyword> kws;
  for (const auto& v : vocab) kws.push_back({v, 1, 1});
  const auto net = build_cooccurrence_network(kws, docs, unigram_config());

  std::map<std::pair<std::string, std::string>, double> oracle;
  for (const auto& a : vocab)
    for (const auto& b : vocab) {
      if (!(a < b)) continue;
      double n = 0;
      for (const auto& d : docs) {
        const auto has = [&](const std::string& w) { return (" " + d).find(" " + w + " ") != std::string::npos; };
        n += has(a) && has(b);
      }
      if (n > 0) oracle[{a, b}] = n;
    }
  std::map<std::pair<std::string, std::string>, double> got;
  for (const auto& e : net.graph.edges) {
    CHECK(e.u != e.v);
    got[{std::min(net.labels[e.u], net.labels[e.v]), std::max(net.labels[e.u], net.labels[e.v])}] = e.weight;
  }
  CHECK(got == oracle);
}

namespace {

/// Random co-occurrence network with a handful of dense groups.
CooccurrenceNetwork random_network(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  CooccurrenceNetwork net;
  for (std::size_t i = 0; i < n; ++i) net.labels.push_back("k" + std::string(i < 10 ? "0" : "") + std::to_string(i));
  net.graph.node_count = n;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) {
      const bool same = i % 4 == j % 4;
      if (rng.uniform() < (same ? 0.6 : 0.1)) net.graph.edges.push_back({i, j, 1.0 + static_cast<double>(rng.below(same ? 8 : 3))});
    }
  return net;
}

}  // namespace

TEST_CASE("filtering invariants hold at every grid point") {
  const auto net = random_network(40, 4);
  for (double theta : {1.0, 2.0, 4.0, 6.0})
    for (std::size_t kmax : {1u, 3u, 8u, 100u}) {
      const auto f = apply_filter(net, {theta, kmax});
      std::vector<std::size_t> deg(f.labels.size(), 0);
      for (const auto& e : f.graph.edges) {
        CHECK(e.weight >= theta);
        ++deg[e.u];
        ++deg[e.v];
      }
      for (const auto d : deg) {
        CHECK(d <= kmax);
        CHECK(d >= 1);
      }
    }
}

TEST_CASE("degree pruning removes highest-degree nodes first with lexicographic ties") {
  // star b-{a,c,d} plus edge c-d: degrees b=3, c=2, d=2, a=1
  CooccurrenceNetwork net;
  net.labels = {"a", "b", "c", "d"};
  net.graph.node_count = 4;
  net.graph.edges = {{1, 0, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}};
  const auto f = apply_filter(net, {1.0, 1});
  // removing b leaves c-d, both of degree 1
  CHECK(f.labels == std::vector<std::string>{"c", "d"});
  CHECK(f.graph.edges.size() == 1);
}

TEST_CASE("Pareto selection") {
  const auto net = random_network(40, 9);
  SUBCASE("single grid point is trivially selected") {
    const auto r = filter_and_select(net, {{1.0, 100}}, 1);
    CHECK(r.selected_index == 0);
    CHECK(r.grid[0].on_front);
  }
  SUBCASE("front holds no dominated point and contains the selection") {
    std::vector<FilterPoint> grid;
    for (double t : {1.0, 2.0, 3.0, 5.0})
      for (std::size_t k : {2u, 5u, 10u, 40u}) grid.push_back({t, k});
    const auto r = filter_and_select(net, grid, 3);
    CHECK(r.grid[r.selected_index].on_front);
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
      if (!r.grid[i].on_front) continue;
      for (std::size_t j = 0; j < r.grid.size(); ++j) {
        if (!r.grid[j].modularity) continue;
        const bool dominates = *r.grid[j].modularity >= *r.grid[i].modularity &&
                               r.grid[j].node_count >= r.grid[i].node_count &&
                               (*r.grid[j].modularity > *r.grid[i].modularity || r.grid[j].node_count > r.grid[i].node_count);
        CHECK_FALSE(dominates);
      }
    }
    CHECK(r.community.size() == r.labels.size());
    CHECK(r.modularity == *r.grid[r.selected_index].modularity);
  }
  SUBCASE("dominated point excluded") {
    std::vector<GridOutcome> o(2);
    o[0].modularity = 0.5;
    o[0].node_count = 10;
    o[1].modularity = 0.4;
    o[1].node_count = 8;
    CHECK(pareto_front(o) == std::vector<std::size_t>{0});
  }
  SUBCASE("empty grid point is recorded without modularity and excluded") {
    const auto r = filter_and_select(net, {{1.0, 100}, {1000.0, 100}}, 1);
    CHECK_FALSE(r.grid[1].modularity.has_value());
    CHECK_FALSE(r.grid[1].on_front);
    CHECK(r.selected_index == 0);
  }
  SUBCASE("explicit choice must be on the front") {
    CHECK_THROWS_AS(filter_and_select(net, {{1.0, 100}, {1000.0, 100}}, 1, 1), InputError);
    CHECK_THROWS_AS(filter_and_select(net, {}, 1), InputError);
  }
}

namespace {

CitationSemanticNetwork two_community_network() {
  CitationSemanticNetwork n;
  n.labels = {"alpha", "beta", "delta", "gamma"};
  n.community = {0, 0, 1, 1};
  n.edges = {{0, 1, 1.0}, {2, 3, 1.0}};
  return n;
}

}  // namespace

TEST_CASE("citation classification shares") {
  const auto cfg = unigram_config();
  const auto corpus = fixtures::corpus(
      {article("P1", {"x"}), article("P2", {"x"}), article("P3", {"x"})},
      {cite("c1", "P1", 1, "alpha beta alpha"), cite("c2", "P2", 1, "alpha alpha gamma"), cite("c3", "P2", 1, "beta")});
  const auto nb = build_neighborhood(corpus);
  const auto out = classify_articles_by_citation(corpus, nb, two_community_network(), cfg);
  const auto& c = out.classification;
  c.validate();
  SUBCASE("indicator row when the neighborhood has one community") {
    CHECK(c.shares(0, 0) == 1.0);
    CHECK(c.shares(0, 1) == 0.0);
  }
  SUBCASE("3 occurrences in A and 1 in B") {
    CHECK(c.shares(1, 0) == 0.75);
    CHECK(c.shares(1, 1) == 0.25);
  }
  SUBCASE("article without neighborhood is unclassified and uniform") {
    CHECK(c.unclassified[2]);
    CHECK(c.shares(2, 0) == 0.5);
  }
  SUBCASE("wordcloud") {
    const auto& words = out.wordclouds.at("P2");
    REQUIRE(words.size() == 3);
    CHECK(words[0].ngram == "alpha");
    CHECK(words[0].count == 2);
    const auto j = wordcloud_json("P2", words);
    CHECK(j.at("article_id") == "P2");
    CHECK(j.at("words").size() == 3);
  }
}

TEST_CASE("citation classification of a 12-article fixture equals a brute-force tally") {
  const auto cfg = unigram_config();
  const std::vector<std::string> vocab = {"alpha", "beta", "gamma", "delta", "noise"};
  Rng rng(12);
  std::vector<Article> arts;
  std::vector<CitationRecord> recs;
  std::map<std::string, std::string> abstracts;
  for (int i = 0; i < 12; ++i) arts.push_back(article("P" + std::to_string(i), {"x"}));
  for (int j = 0; j < 20; ++j) {
    std::string text;
    for (int w = 0; w < 5; ++w) text += vocab[rng.below(vocab.size())] + " ";
    const std::string id = "c" + std::to_string(j);
    abstracts[id] = text;
    recs.push_back(cite(id, "P" + std::to_string(rng.below(12)), 1, text));
    if (j % 3 == 0) recs.push_back(cite("d" + std::to_string(j), id, 2, "delta delta"));
  }
  for (int j = 0; j < 20; j += 3) abstracts["d" + std::to_string(j)] = "delta delta";
  const auto corpus = fixtures::corpus(arts, recs);
  const auto nb = build_neighborhood(corpus);
  const auto net = two_community_network();
  const auto c = classify_articles_by_citation(corpus, nb, net, cfg).classification;

  const std::map<std::string, int> community = {{"alpha", 0}, {"beta", 0}, {"gamma", 1}, {"delta", 1}};
  for (std::size_t r = 0; r < arts.size(); ++r) {
    // neighbors at one hop (citing the article) and two hops (citing those, or co-citing)
    std::set<std::string> hood;
    for (const auto& x : recs)
      if (x.cited_id == arts[r].id) hood.insert(x.citing_id);
    std::set<std::string> second;
    for (const auto& x : recs)
      for (const auto& h : hood) {
        if (x.cited_id == h) second.insert(x.citing_id);
        if (x.citing_id == h) second.insert(x.cited_id);
      }
    hood.insert(second.begin(), second.end());
    double t[2] = {0, 0};
    for (const auto& h : hood) {
      if (!abstracts.contains(h)) continue;
      std::istringstream words(abstracts[h]);
      std::string w;
      while (words >> w)
        if (community.contains(w)) t[community.at(w)] += 1;
    }
    if (t[0] + t[1] == 0) {
      CHECK(c.unclassified[r]);
    } else {
      CHECK(c.shares(r, 0) == doctest::Approx(t[0] / (t[0] + t[1])).epsilon(1e-12));
      CHECK(c.shares(r, 1) == doctest::Approx(t[1] / (t[0] + t[1])).epsilon(1e-12));
    }
  }
}

TEST_CASE("depth-2 flag limits the per-article neighborhood") {
  const auto cfg = unigram_config();
  const auto corpus = fixtures::corpus({article("A", {"x"})}, {cite("B", "A", 1, "alpha"), cite("C", "B", 2, "gamma gamma gamma")});
  const auto nb = build_neighborhood(corpus);
  const auto with = classify_articles_by_citation(corpus, nb, two_community_network(), cfg, true).classification;
  const auto without = classify_articles_by_citation(corpus, nb, two_community_network(), cfg, false).classification;
  CHECK(with.shares(0, 0) == 0.25);
  CHECK(without.shares(0, 0) == 1.0);
}

TEST_CASE("relevant keyword CSV export") {
  const auto net = two_community_network();
  const auto csv = relevant_keywords_csv({{"alpha", 2.5, 3}, {"zeta, eta", 1.0, 1}}, &net);
  CHECK(csv.rfind("ngram,relevance,document_frequency,community\n", 0) == 0);
  CHECK(csv.find("alpha,2.5,3,0\n") != std::string::npos);
  CHECK(csv.find("\"zeta, eta\",1,1,\n") != std::string::npos);
}
