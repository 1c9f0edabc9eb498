#include <set>

#include "semcorpus/service.hpp"

namespace semcorpus {
namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw InputError("config: '" + where + "' must be an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.contains(key)) throw InputError("config: unknown key '" + where + (where.empty() ? "" : ".") + key + "'");
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j[key].is_null()) out = j[key].get<T>();
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key)) out = j[key].is_null() ? std::nullopt : std::optional<T>(j[key].get<T>());
}

template <class T>
json opt(const std::optional<T>& x) {
  return x ? json(*x) : json(nullptr);
}

}  // namespace

std::vector<FilterPoint> PipelineConfig::effective_grid() const {
  if (!filter_grid.empty()) return filter_grid;
  std::vector<FilterPoint> grid;
  for (const double w : {1.0, 2.0, 3.0, 5.0, 10.0})
    for (const std::size_t k : {10, 50, 100, 500, 1000}) grid.push_back({w, k});
  return grid;
}

PipelineConfig config_from_json(const json& j) {
  PipelineConfig c;
  try {
    check_keys(j, "", {"seed", "citations", "topics", "geo", "complementarity", "labels"});
    read(j, "seed", c.seed);
    if (j.contains("citations")) {
      const auto& s = j["citations"];
      check_keys(s, "citations",
                 {"ngram_max", "n_k", "theta_w", "k_max", "stopword_languages", "filter_grid", "filter_choice",
                  "include_depth2"});
      read(s, "ngram_max", c.relevance.ngram_max);
      read(s, "n_k", c.relevance.n_k);
      read(s, "theta_w", c.relevance.theta_w);
      read(s, "k_max", c.relevance.k_max);
      read(s, "stopword_languages", c.relevance.stopword_languages);
      read(s, "filter_choice", c.filter_choice);
      read(s, "include_depth2", c.include_depth2);
      if (s.contains("filter_grid"))
        for (const auto& p : s["filter_grid"]) {
          check_keys(p, "citations.filter_grid[]", {"theta_w", "k_max"});
          c.filter_grid.push_back({p.at("theta_w").get<double>(), p.at("k_max").get<std::size_t>()});
        }
    }
    if (j.contains("topics")) {
      const auto& t = j["topics"];
      check_keys(t, "topics",
                 {"language", "candidates", "replications", "fixed_k", "alpha", "eta", "iterations", "burn_in", "thin",
                  "heldout_fraction", "fold_in_iterations", "keep_determiners", "top_words", "evolution_threshold"});
      read(t, "language", c.topics.language);
      read(t, "candidates", c.topics.candidates);
      read(t, "replications", c.topics.replications);
      read(t, "fixed_k", c.topics.fixed_k);
      read(t, "alpha", c.topics.sampler.alpha);
      read(t, "eta", c.topics.sampler.eta);
      read(t, "iterations", c.topics.sampler.iterations);
      read(t, "burn_in", c.topics.sampler.burn_in);
      read(t, "thin", c.topics.sampler.thin);
      read(t, "heldout_fraction", c.topics.heldout.fraction);
      read(t, "fold_in_iterations", c.topics.heldout.fold_in_iterations);
      read(t, "keep_determiners", c.topics.preprocess.keep_determiners);
      read(t, "top_words", c.topics.top_words);
      read(t, "evolution_threshold", c.topics.evolution_threshold);
    }
    if (j.contains("geo")) {
      check_keys(j["geo"], "geo", {"k", "geometry"});
      read(j["geo"], "k", c.cluster_k);
      read(j["geo"], "geometry", c.geometry_path);
    }
    if (j.contains("complementarity")) {
      const auto& m = j["complementarity"];
      check_keys(m, "complementarity", {"b", "shuffle_fraction", "thresholds"});
      read(m, "b", c.bootstrap_b);
      read(m, "shuffle_fraction", c.shuffle_fraction);
      read(m, "thresholds", c.modularity_thresholds);
    }
    if (j.contains("labels")) {
      check_keys(j["labels"], "labels", {"keywords", "citations", "topics"});
      for (const auto& [method, map] : j["labels"].items())
        for (const auto& [id, label] : map.items()) c.labels[method][std::stoul(id)] = label.get<std::string>();
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw InputError("config: label keys must be community ids");
  }
  c.relevance.validate();
  if (c.cluster_k < 1) throw InputError("config: geo.k must be at least 1");
  if (c.bootstrap_b < 1) throw InputError("config: complementarity.b must be at least 1");
  if (c.topics.candidates.empty() && !c.topics.fixed_k) throw InputError("config: topics.candidates is empty");
  if (c.topics.sampler.iterations <= c.topics.sampler.burn_in)
    throw InputError("config: topics.iterations must exceed topics.burn_in");
  return c;
}

json to_json(const PipelineConfig& c) {
  json grid = json::array();
  for (const auto& p : c.effective_grid()) grid.push_back({{"theta_w", p.theta_w}, {"k_max", p.k_max}});
  json labels = json::object();
  for (const auto& [method, map] : c.labels)
    for (const auto& [id, label] : map) labels[method][std::to_string(id)] = label;
  return {{"seed", c.seed},
          {"citations",
           {{"ngram_max", c.relevance.ngram_max},
            {"n_k", c.relevance.n_k},
            {"theta_w", c.relevance.theta_w},
            {"k_max", c.relevance.k_max},
            {"stopword_languages", c.relevance.stopword_languages},
            {"filter_grid", grid},
            {"filter_choice", opt(c.filter_choice)},
            {"include_depth2", c.include_depth2}}},
          {"topics",
           {{"language", c.topics.language},
            {"candidates", c.topics.candidates},
            {"replications", c.topics.replications},
            {"fixed_k", opt(c.topics.fixed_k)},
            {"alpha", opt(c.topics.sampler.alpha)},
            {"eta", c.topics.sampler.eta},
            {"iterations", c.topics.sampler.iterations},
            {"burn_in", c.topics.sampler.burn_in},
            {"thin", c.topics.sampler.thin},
            {"heldout_fraction", c.topics.heldout.fraction},
            {"fold_in_iterations", c.topics.heldout.fold_in_iterations},
            {"keep_determiners", c.topics.preprocess.keep_determiners},
            {"top_words", c.topics.top_words},
            {"evolution_threshold", c.topics.evolution_threshold}}},
          {"geo", {{"k", c.cluster_k}, {"geometry", opt(c.geometry_path)}}},
          {"complementarity",
           {{"b", c.bootstrap_b}, {"shuffle_fraction", c.shuffle_fraction}, {"thresholds", c.modularity_thresholds}}},
          {"labels", labels}};
}

}  // namespace semcorpus
