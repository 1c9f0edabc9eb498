#include <doctest.h>
#include <set>

#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "semcorpus/geo_profiles.hpp"

using namespace semcorpus;
using fixtures::article;

namespace {

Classification rows(const std::vector<std::string>& ids, const std::vector<std::vector<double>>& shares) {
  Classification c;
  c.method = "keywords";
  c.article_ids = ids;
  for (std::size_t j = 0; j < shares[0].size(); ++j) c.categories.push_back("c" + std::to_string(j));
  c.shares = Matrix(ids.size(), shares[0].size());
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = 0; j < shares[i].size(); ++j) c.shares(i, j) = shares[i][j];
  c.unclassified.assign(ids.size(), false);
  return c;
}

std::vector<double> random_row(Rng& rng, std::size_t m) {
  std::vector<double> r(m);
  for (auto& x : r) x = rng.uniform();
  const double s = std::accumulate(r.begin(), r.end(), 0.0);
  for (auto& x : r) x /= s;
  return r;
}

ProfileSet random_profiles(std::size_t n, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  ProfileSet set;
  set.method = "topics";
  for (std::size_t j = 0; j < m; ++j) set.categories.push_back("c" + std::to_string(j));
  for (std::size_t i = 0; i < n; ++i) {
    std::string code = {static_cast<char>('A' + i / 26), static_cast<char>('A' + i % 26)};
    set.profiles.push_back({code, random_row(rng, m), 1});
  }
  return set;
}

// Lance-Williams recurrence on the doubled Ward scale, started from squared
// Euclidean distances; returns merge costs in order.
std::vector<double> lance_williams_heights(const ProfileSet& set) {
  const std::size_t n = set.profiles.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t t = 0; t < set.categories.size(); ++t)
        d[i][j] += std::pow(set.profiles[i].shares[t] - set.profiles[j].shares[t], 2);
  std::vector<double> size(n, 1.0);
  std::vector<bool> alive(n, true);
  std::vector<double> heights;
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t bi = 0, bj = 0;
    double best = INFINITY;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (alive[i] && alive[j] && d[i][j] < best) best = d[i][j], bi = i, bj = j;
    heights.push_back(best / 2);
    for (std::size_t k = 0; k < n; ++k) {
      if (!alive[k] || k == bi || k == bj) continue;
      const double nk = size[k], ni = size[bi], nj = size[bj];
      d[bi][k] = d[k][bi] = ((ni + nk) * d[bi][k] + (nj + nk) * d[bj][k] - nk * d[bi][bj]) / (ni + nj + nk);
    }
    size[bi] += size[bj];
    alive[bj] = false;
  }
  return heights;
}

double direct_inertia_share(const ProfileSet& set, const CountryClustering& c) {
  const std::size_t m = set.categories.size();
  std::vector<double> grand(m, 0.0);
  for (const auto& p : set.profiles)
    for (std::size_t t = 0; t < m; ++t) grand[t] += p.shares[t] / static_cast<double>(set.profiles.size());
  double total = 0.0, within = 0.0;
  for (const auto& p : set.profiles) {
    const auto q = c.assignment.at(p.country);
    for (std::size_t t = 0; t < m; ++t) {
      total += std::pow(p.shares[t] - grand[t], 2);
      within += std::pow(p.shares[t] - c.cluster_mean_profiles(q, t), 2);
    }
  }
  return 1.0 - within / total;
}

}  // namespace

TEST_CASE("profiles equal grouped means") {
  std::vector<Article> arts;
  std::vector<std::string> ids;
  std::vector<std::vector<double>> shares;
  Rng rng(3);
  const std::vector<std::string> countries = {"FR", "DE", "IT"};
  for (int i = 0; i < 18; ++i) {
    const auto id = "a" + std::to_string(i);
    arts.push_back(article(id, {"k"}, {countries[i % 3]}, {countries[(i / 3) % 3]}));
    ids.push_back(id);
    shares.push_back(random_row(rng, 4));
  }
  const auto corpus = fixtures::corpus(arts);
  const auto c = rows(ids, shares);
  for (const auto alloc : {Allocation::Authoring, Allocation::Studied}) {
    const auto set = country_profiles(c, corpus, alloc);
    REQUIRE(set.profiles.size() == 3);
    CHECK(set.profiles[0].country == "DE");
    for (const auto& p : set.profiles) {
      std::vector<double> mean(4, 0.0);
      std::size_t n = 0;
      for (std::size_t i = 0; i < arts.size(); ++i) {
        const auto& tags = alloc == Allocation::Authoring ? arts[i].authoring_countries : arts[i].studied_countries;
        if (tags[0] != p.country) continue;
        ++n;
        for (int t = 0; t < 4; ++t) mean[t] += shares[i][t];
      }
      CHECK(p.article_count == n);
      for (int t = 0; t < 4; ++t) CHECK(p.shares[t] == doctest::Approx(mean[t] / n).epsilon(1e-12));
      CHECK(std::accumulate(p.shares.begin(), p.shares.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("profile special cases") {
  const auto corpus = fixtures::corpus({article("a", {"k"}, {"FR", "DE"}, {"BR"}), article("b", {"k"}, {"FR"}, {})});
  auto c = rows({"a", "b"}, {{0.2, 0.8}, {0.6, 0.4}});
  const auto studied = country_profiles(c, corpus, Allocation::Studied);
  REQUIRE(studied.profiles.size() == 1);
  CHECK(studied.profiles[0].shares == std::vector<double>{0.2, 0.8});
  const auto authoring = country_profiles(c, corpus, Allocation::Authoring);
  CHECK(authoring.profiles[0].country == "DE");
  CHECK(authoring.profiles[1].shares[0] == doctest::Approx(0.4));

  c.unclassified[1] = true;
  CHECK(country_profiles(c, corpus, Allocation::Authoring).profiles[1].article_count == 1);

  // one country for everything: the corpus-wide mean
  const auto one = fixtures::corpus({article("a", {"k"}), article("b", {"k"})});
  c.unclassified[1] = false;
  CHECK(country_profiles(c, one, Allocation::Authoring).profiles[0].shares[1] == doctest::Approx(0.6));
}

TEST_CASE("ward matches lance-williams oracle") {
  const auto set = random_profiles(30, 5, 8);
  const auto d = ward(set.profiles);
  const auto oracle = lance_williams_heights(set);
  REQUIRE(d.merges.size() == oracle.size());
  for (std::size_t i = 0; i < oracle.size(); ++i)
    CHECK(d.merges[i].height == doctest::Approx(oracle[i]).epsilon(1e-9));
  for (std::size_t i = 1; i < d.merges.size(); ++i) CHECK(d.merges[i].height >= d.merges[i - 1].height * (1 - 1e-12));
  CHECK(d.merges.back().size == 30);
}

TEST_CASE("inertia share") {
  const auto set = random_profiles(50, 6, 2);
  const auto d = ward(set.profiles);
  double previous = -1.0;
  for (std::size_t k = 1; k <= 50; ++k) {
    const auto c = cut(set, d, k);
    CHECK(c.inertia_share >= previous);
    previous = c.inertia_share;
    std::set<std::size_t> used;
    for (const auto& [_, q] : c.assignment) used.insert(q);
    CHECK(used.size() == k);
    if (k > 1 && k < 50) CHECK(c.inertia_share == doctest::Approx(direct_inertia_share(set, c)).epsilon(1e-9));
    for (std::size_t q = 0; q < k; ++q) {
      const auto r = c.cluster_mean_profiles.row(q);
      CHECK(std::accumulate(r.begin(), r.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  CHECK(cut(set, d, 50).inertia_share == 1.0);
  CHECK(cut(set, d, 1).inertia_share == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(cluster_countries(set, 51), InputError);
}

TEST_CASE("identical profiles merge first at height zero") {
  auto set = random_profiles(6, 3, 5);
  set.profiles[4].shares = set.profiles[1].shares;
  const auto d = ward(set.profiles);
  CHECK(d.merges[0].a == 1);
  CHECK(d.merges[0].b == 4);
  CHECK(d.merges[0].height == 0.0);
}

TEST_CASE("ties break by country code") {
  ProfileSet set;
  set.method = "keywords";
  set.categories = {"x", "y"};
  set.profiles = {{"AA", {1, 0}, 1}, {"BB", {1, 0}, 1}, {"CC", {0, 1}, 1}, {"DD", {0, 1}, 1}};
  const auto c = cluster_countries(set, 2);
  CHECK(c.dendrogram.merges[0].a == 0);
  CHECK(c.dendrogram.merges[0].b == 1);
  CHECK(c.assignment.at("AA") == 0);
  CHECK(c.assignment.at("DD") == 1);
  CHECK(c.inertia_share == 1.0);
}

TEST_CASE("clustering and map export") {
  ProfileSet set;
  set.method = "keywords";
  set.allocation = Allocation::Authoring;
  set.categories = {"x", "y"};
  set.profiles = {{"BR", {0.9, 0.1}, 2}, {"FR", {0.2, 0.8}, 5}, {"ZZ", {0.25, 0.75}, 1}};
  const auto c = cluster_countries(set, 2);
  const auto j = to_json(c);
  for (const auto* key : {"method", "allocation", "k", "inertia_share", "assignment", "cluster_mean_profiles", "dendrogram"})
    CHECK(j.contains(key));
  CHECK(j["advisory"] == true);
  CHECK(j["allocation"] == "authoring");

  const auto geometry = nlohmann::json::parse(R"({"type": "FeatureCollection", "features": [
    {"type": "Feature", "properties": {"iso_a2": "BR"}, "geometry": {"type": "Point", "coordinates": [0, 0]}},
    {"type": "Feature", "properties": {"iso_a2": "FR"}, "geometry": {"type": "Point", "coordinates": [1, 1]}},
    {"type": "Feature", "properties": {"iso_a2": "US"}, "geometry": {"type": "Point", "coordinates": [2, 2]}}]})");
  const auto map = export_map(c, geometry);
  CHECK(map.missing == std::vector<std::string>{"ZZ"});
  const auto& features = map.geojson["features"];
  REQUIRE(features.size() == 3);
  CHECK(features[0]["properties"]["cluster"] == 0);
  CHECK(features[1]["properties"]["cluster"] == 1);
  CHECK(features[1]["properties"]["profile"][1] == 0.8);
  CHECK(features[2]["properties"]["cluster"].is_null());
  CHECK(map.geojson["type"] == "FeatureCollection");
  CHECK_THROWS_AS(export_map(c, nlohmann::json::object()), InputError);
}
