#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "semcorpus/classification.hpp"
#include "semcorpus/common.hpp"
#include "semcorpus/corpus.hpp"

namespace semcorpus {

enum class Allocation { Authoring, Studied };

std::string allocation_name(Allocation a);
Allocation parse_allocation(const std::string& s);

struct CountryProfile {
  std::string country;
  std::vector<double> shares;
  std::size_t article_count = 0;
};

/// Profiles of one classification under one allocation, sorted by country code.
struct ProfileSet {
  std::string method;
  Allocation allocation = Allocation::Studied;
  std::vector<std::string> categories;
  std::vector<CountryProfile> profiles;
};

/// Mean classification row per country. Multi-country articles count fully
/// for each country; unclassified rows are skipped.
ProfileSet country_profiles(const Classification& classification, const Corpus& corpus, Allocation allocation);

struct Merge {
  std::size_t a = 0;  // cluster ids: leaves 0..n-1, merge i creates n + i
  std::size_t b = 0;
  double height = 0.0;  // increase of within-cluster inertia
  std::size_t size = 0;
};

struct Dendrogram {
  std::vector<std::string> labels;
  std::vector<Merge> merges;
};

/// Ward agglomeration on squared Euclidean distance. Equal costs are broken
/// by the smallest country code of each cluster.
Dendrogram ward(const std::vector<CountryProfile>& profiles);

struct CountryClustering {
  std::string method;
  Allocation allocation = Allocation::Studied;
  std::size_t k = 0;
  std::map<std::string, std::size_t> assignment;
  double inertia_share = 0.0;
  Matrix cluster_mean_profiles;  // k x categories
  std::map<std::string, std::vector<double>> profiles;
  std::vector<std::string> categories;
  Dendrogram dendrogram;
  bool advisory = false;
};

/// Clusters numbered by their smallest country code.
CountryClustering cut(const ProfileSet& set, const Dendrogram& dendrogram, std::size_t k);
CountryClustering cluster_countries(const ProfileSet& set, std::size_t k);

nlohmann::json to_json(const ProfileSet& set);
nlohmann::json to_json(const CountryClustering& c);

struct MapExport {
  nlohmann::json geojson;
  std::vector<std::string> missing;  // clustered codes without geometry
};

/// Joins clusters onto a FeatureCollection keyed by each feature's `iso_a2`.
MapExport export_map(const CountryClustering& c, const nlohmann::json& geometry);
MapExport export_map(const CountryClustering& c, const std::filesystem::path& geometry_path);


ProfileSet profile_set_from_json(const nlohmann::json& j);
Dendrogram dendrogram_from_json(const nlohmann::json& j);

}  // namespace semcorpus
