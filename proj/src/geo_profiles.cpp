#include "semcorpus/geo_profiles.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>

namespace semcorpus {
namespace {

double squared_distance(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return s;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

std::string allocation_name(Allocation a) { return a == Allocation::Authoring ? "authoring" : "studied"; }

Allocation parse_allocation(const std::string& s) {
  if (s == "authoring") return Allocation::Authoring;
  if (s == "studied") return Allocation::Studied;
  throw InputError("unknown allocation '" + s + "' (expected authoring or studied)");
}

ProfileSet country_profiles(const Classification& classification, const Corpus& corpus, Allocation allocation) {
  ProfileSet set;
  set.method = classification.method;
  set.allocation = allocation;
  set.categories = classification.categories;
  const std::size_t m = classification.categories.size();
  std::map<std::string, CountryProfile> acc;
  for (std::size_t r = 0; r < classification.article_ids.size(); ++r) {
    if (classification.unclassified[r]) continue;
    const Article* a = corpus.find(classification.article_ids[r]);
    if (!a) throw InputError("classification row '" + classification.article_ids[r] + "' is not a corpus article");
    const auto& countries = allocation == Allocation::Authoring ? a->authoring_countries : a->studied_countries;
    const auto row = classification.shares.row(r);
    for (const auto& c : countries) {
      auto& p = acc[c];
      if (p.shares.empty()) {
        p.country = c;
        p.shares.assign(m, 0.0);
      }
      for (std::size_t j = 0; j < m; ++j) p.shares[j] += row[j];
      ++p.article_count;
    }
  }
  for (auto& [c, p] : acc) {
    for (auto& x : p.shares) x /= static_cast<double>(p.article_count);
    set.profiles.push_back(std::move(p));
  }
  return set;
}

Dendrogram ward(const std::vector<CountryProfile>& profiles) {
  const std::size_t n = profiles.size();
  Dendrogram d;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (const auto& p : profiles) d.labels.push_back(p.country);
  for (std::size_t i = 1; i < n; ++i)
    if (d.labels[i] <= d.labels[i - 1]) throw InputError("ward: profiles must be sorted by unique country code");

  struct Cluster {
    std::size_t id;
    std::size_t first;  // smallest leaf index, i.e. smallest country code
    std::size_t size;
    std::vector<double> centroid;
  };
  std::vector<Cluster> active;
  for (std::size_t i = 0; i < n; ++i) active.push_back({i, i, 1, profiles[i].shares});

  while (active.size() > 1) {
    // active stays ordered by `first`, so the first minimum found wins ties
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 1;
    for (std::size_t i = 0; i < active.size(); ++i)
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const double na = static_cast<double>(active[i].size), nb = static_cast<double>(active[j].size);
        const double cost = na * nb / (na + nb) * squared_distance(active[i].centroid, active[j].centroid);
        if (cost < best) {
          best = cost;
          bi = i;
          bj = j;
        }
      }
    auto& a = active[bi];
    const auto& b = active[bj];
    const double na = static_cast<double>(a.size), nb = static_cast<double>(b.size);
    for (std::size_t t = 0; t < a.centroid.size(); ++t) a.centroid[t] = (na * a.centroid[t] + nb * b.centroid[t]) / (na + nb);
    d.merges.push_back({a.id, b.id, best, a.size + b.size});
    a.id = n + d.merges.size() - 1;
    a.size += b.size;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return d;
}

CountryClustering cut(const ProfileSet& set, const Dendrogram& dendrogram, std::size_t k) {
  const std::size_t n = dendrogram.labels.size();
  if (k < 1 || k > n)
    throw InputError("cannot cut " + std::to_string(n) + " profiles into " + std::to_string(k) + " clusters");
  CountryClustering c;
  c.method = set.method;
  c.allocation = set.allocation;
  c.k = k;
  c.categories = set.categories;
  c.dendrogram = dendrogram;
  c.advisory = set.allocation == Allocation::Authoring;

  // node ids 0..2n-2; union the first n-k merges
  std::vector<std::size_t> parent(2 * n);
  std::iota(parent.begin(), parent.end(), 0);
  double within = 0.0, total = 0.0;
  for (std::size_t i = 0; i < dendrogram.merges.size(); ++i) {
    const auto& m = dendrogram.merges[i];
    total += m.height;
    if (i < n - k) {
      parent[find_root(parent, m.a)] = n + i;
      parent[find_root(parent, m.b)] = n + i;
      within += m.height;
    }
  }
  c.inertia_share = total > 0.0 ? 1.0 - within / total : 1.0;
  if (k == n) c.inertia_share = 1.0;

  std::map<std::size_t, std::size_t> cluster_of_root;
  std::vector<std::size_t> leaf_cluster(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = find_root(parent, i);
    const auto [it, fresh] = cluster_of_root.emplace(root, cluster_of_root.size());
    leaf_cluster[i] = it->second;
    c.assignment[dendrogram.labels[i]] = it->second;
  }
  const std::size_t m = set.categories.size();
  c.cluster_mean_profiles = Matrix(k, m);
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++sizes[leaf_cluster[i]];
    c.profiles[dendrogram.labels[i]] = set.profiles[i].shares;
    for (std::size_t j = 0; j < m; ++j) c.cluster_mean_profiles(leaf_cluster[i], j) += set.profiles[i].shares[j];
  }
  for (std::size_t q = 0; q < k; ++q)
    for (std::size_t j = 0; j < m; ++j) c.cluster_mean_profiles(q, j) /= static_cast<double>(sizes[q]);
  return c;
}

CountryClustering cluster_countries(const ProfileSet& set, std::size_t k) {
  if (k > set.profiles.size())
    throw InputError("k = " + std::to_string(k) + " exceeds the " + std::to_string(set.profiles.size()) +
                     " country profiles");
  return cut(set, ward(set.profiles), k);
}

nlohmann::json to_json(const ProfileSet& set) {
  nlohmann::json profiles = nlohmann::json::array();
  for (const auto& p : set.profiles)
    profiles.push_back({{"country", p.country}, {"shares", p.shares}, {"article_count", p.article_count}});
  return {{"method", set.method},
          {"allocation", allocation_name(set.allocation)},
          {"categories", set.categories},
          {"profiles", profiles}};
}

nlohmann::json to_json(const CountryClustering& c) {
  nlohmann::json means = nlohmann::json::array();
  for (std::size_t q = 0; q < c.cluster_mean_profiles.rows(); ++q) {
    const auto row = c.cluster_mean_profiles.row(q);
    means.push_back({{"cluster", q}, {"shares", std::vector<double>(row.begin(), row.end())}});
  }
  nlohmann::json merges = nlohmann::json::array();
  for (const auto& m : c.dendrogram.merges)
    merges.push_back({{"a", m.a}, {"b", m.b}, {"height", m.height}, {"size", m.size}});
  nlohmann::json j = {{"method", c.method},
                      {"allocation", allocation_name(c.allocation)},
                      {"k", c.k},
                      {"inertia_share", c.inertia_share},
                      {"assignment", c.assignment},
                      {"categories", c.categories},
                      {"cluster_mean_profiles", means},
                      {"dendrogram", {{"labels", c.dendrogram.labels}, {"merges", merges}}},
                      {"advisory", c.advisory}};
  if (c.advisory)
    j["advisory_note"] = "authoring countries are highly concentrated; treat this clustering as indicative";
  return j;
}

MapExport export_map(const CountryClustering& c, const nlohmann::json& geometry) {
  if (!geometry.is_object() || geometry.value("type", "") != "FeatureCollection" || !geometry.contains("features"))
    throw InputError("geometry is not a GeoJSON FeatureCollection");
  MapExport out;
  out.geojson = {{"type", "FeatureCollection"}, {"features", nlohmann::json::array()}};
  std::set<std::string> seen;
  for (const auto& f : geometry["features"]) {
    const auto& props = f.value("properties", nlohmann::json::object());
    if (!props.contains("iso_a2") || !props["iso_a2"].is_string()) continue;
    const auto code = props["iso_a2"].get<std::string>();
    seen.insert(code);
    nlohmann::json feature = {{"type", "Feature"}, {"geometry", f.value("geometry", nlohmann::json())}};
    nlohmann::json p = {{"country", code}, {"cluster", nullptr}, {"profile", nullptr}};
    if (const auto it = c.assignment.find(code); it != c.assignment.end()) {
      p["cluster"] = it->second;
      p["profile"] = c.profiles.at(code);
    }
    feature["properties"] = p;
    out.geojson["features"].push_back(feature);
  }
  for (const auto& [code, _] : c.assignment)
    if (!seen.contains(code)) out.missing.push_back(code);
  return out;
}

MapExport export_map(const CountryClustering& c, const std::filesystem::path& geometry_path) {
  std::ifstream in(geometry_path);
  if (!in) throw InputError("cannot open geometry file " + geometry_path.string());
  nlohmann::json g;
  try {
    in >> g;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(geometry_path.string() + ": " + e.what());
  }
  return export_map(c, g);
}


ProfileSet profile_set_from_json(const nlohmann::json& j) {
  try {
    ProfileSet s;
    s.method = j.at("method").get<std::string>();
    s.allocation = parse_allocation(j.at("allocation").get<std::string>());
    s.categories = j.at("categories").get<std::vector<std::string>>();
    for (const auto& p : j.at("profiles"))
      s.profiles.push_back({p.at("country").get<std::string>(), p.at("shares").get<std::vector<double>>(),
                            p.at("article_count").get<std::size_t>()});
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed profile export: ") + e.what());
  }
}

Dendrogram dendrogram_from_json(const nlohmann::json& j) {
  try {
    Dendrogram d;
    d.labels = j.at("labels").get<std::vector<std::string>>();
    for (const auto& m : j.at("merges"))
      d.merges.push_back({m.at("a").get<std::size_t>(), m.at("b").get<std::size_t>(), m.at("height").get<double>(),
                          m.at("size").get<std::size_t>()});
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed dendrogram export: ") + e.what());
  }
}

}  // namespace semcorpus
