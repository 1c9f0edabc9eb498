#include <sstream>

#include "semcorpus/complementarity.hpp"
#include "semcorpus/digest.hpp"
#include "semcorpus/geo_profiles.hpp"
#include "semcorpus/keyword_network.hpp"
#include "semcorpus/service.hpp"

namespace semcorpus {
namespace {

using nlohmann::json;

const char* const kMethods[] = {"keywords", "citations", "topics"};

std::string dump(const json& j) { return j.dump(1) + "\n"; }

std::string fulltext_digest(const std::string& ref) {
  const auto hash = ref.rfind('#');
  const auto path = hash == std::string::npos ? ref : ref.substr(0, hash);
  const auto index = hash == std::string::npos ? std::string("0") : ref.substr(hash + 1);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return "missing";
  return sha256_file(path) + "#" + index;
}

class Run {
public:
  Run(const Corpus& corpus, const PipelineConfig& config) : corpus_(corpus), config_(config) {}

  Snapshot execute() {
    snap_.id = snapshot_id(corpus_, config_);
    snap_.config = to_json(config_);
    stage("corpus-store", [&] { corpus_store(); });
    stage("keyword-network", [&] { keywords(); });
    stage("citation-semantics", [&] { citations(); });
    stage("topic-model", [&] { topics(); });
    stage("geo-profiles", [&] { geography(); });
    stage("complementarity", [&] { complementarity(); });
    for (const auto& [method, c] : classifications_) put("classifications/" + method + ".json", to_json(c));
    json skipped = json::object();
    for (const auto& [m, why] : snap_.skipped) skipped[m] = why;
    put("skipped.json", skipped);
    put("config.json", snap_.config);
    put("log.json", snap_.log);
    return std::move(snap_);
  }

private:
  template <class F>
  void stage(const std::string& name, F&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      snap_.log.push_back(name + ": failed: " + e.what());
      throw PipelineError(name + ": " + e.what(), snap_.log);
    }
  }

  void put(const std::string& file, const json& j) { snap_.files[file] = dump(j); }
  void log(const std::string& line) { snap_.log.push_back(line); }
  void skip(const std::string& module, const std::string& reason) {
    snap_.skipped[module] = "skipped: missing input (" + reason + ")";
    log(module + ": " + snap_.skipped[module]);
  }
  const std::map<std::uint32_t, std::string>& labels(const std::string& method) {
    static const std::map<std::uint32_t, std::string> none;
    const auto it = config_.labels.find(method);
    return it == config_.labels.end() ? none : it->second;
  }

  void corpus_store() {
    auto j = corpus_to_json(corpus_);
    j["provenance"]["ingested_at"] = "";
    put("corpus.json", j);
    put("corpus_stats.json", to_json(corpus_stats(corpus_)));
    put("geo_flows.json", to_json(geo_flow_matrix(corpus_)));
    log("corpus-store: " + std::to_string(corpus_.articles().size()) + " articles");
  }

  void keywords() {
    auto net = project_keyword_network(corpus_);
    net = detect_communities(edge_statistics(std::move(net)), derive_seed(config_.seed, 1));
    put("keyword_network.json", to_json(net));
    log("keyword-network: " + std::to_string(net.nodes.size()) + " keywords, " +
        std::to_string(net.community_count()) + " communities");
    if (net.community_count() == 0) {
      skip("keywords-classification", "no keyword pair co-occurs");
      return;
    }
    classifications_["keywords"] = classify_articles_by_keywords(corpus_, net, labels("keywords"));
  }

  void citations() {
    if (corpus_.citations().empty()) return skip("citations", "no citation records");
    const auto nb = build_neighborhood(corpus_);
    std::vector<std::string> abstracts;
    for (const auto& [_, text] : nb.abstracts) abstracts.push_back(text);
    if (abstracts.empty()) return skip("citations", "no citing-article abstracts");
    const auto relevant = extract_relevant_keywords(abstracts, config_.relevance);
    const auto co = build_cooccurrence_network(relevant.keywords, abstracts, config_.relevance);
    if (co.graph.edges.empty()) return skip("citations", "relevant keywords never co-occur");
    const auto net = filter_and_select(co, config_.effective_grid(), derive_seed(config_.seed, 2), config_.filter_choice);
    const auto cc = classify_articles_by_citation(corpus_, nb, net, config_.relevance, config_.include_depth2,
                                                  labels("citations"));
    auto j = to_json(net);
    if (relevant.notice) j["relevance_notice"] = *relevant.notice;
    put("citation_network.json", j);
    put("neighborhood.json", to_json(nb));
    snap_.files["relevant_keywords.csv"] = relevant_keywords_csv(relevant.keywords, &net);
    json clouds = json::object();
    for (const auto& [id, words] : cc.wordclouds) clouds[id] = wordcloud_json(id, words);
    put("wordclouds.json", clouds);
    classifications_["citations"] = cc.classification;
    log("citation-semantics: " + std::to_string(relevant.keywords.size()) + " relevant keywords, " +
        std::to_string(net.community_count()) + " communities");
  }

  void topics() {
    const auto& tc = config_.topics;
    const FallbackTagger tagger(tc.language);
    std::vector<TokenStream> streams;
    for (const auto& a : corpus_.articles())
      if (a.language == tc.language && a.fulltext_ref) streams.push_back({a.id, read_fulltext(*a.fulltext_ref, tagger)});
    if (streams.empty()) return skip("topics", "no '" + tc.language + "' full texts");
    const auto counts = preprocess(streams, tc.preprocess);
    for (const auto& n : counts.notices) log("topic-model: " + n);

    json selection = nullptr;
    std::size_t k = 0;
    if (tc.fixed_k) {
      k = *tc.fixed_k;
    } else {
      std::vector<std::size_t> candidates;
      for (const auto c : tc.candidates)
        if (c <= counts.terms()) candidates.push_back(c);
        else log("topic-model: candidate K = " + std::to_string(c) + " exceeds the dictionary, dropped");
      if (candidates.empty()) throw InputError("no topic-count candidate fits the dictionary");
      const auto report =
          select_topic_count(counts, candidates, tc.replications, derive_seed(config_.seed, 3), tc.sampler, tc.heldout);
      selection = to_json(report);
      k = report.chosen;
    }
    auto sampler = tc.sampler;
    sampler.topics = k;
    sampler.seed = derive_seed(config_.seed, 4);
    const auto model = fit_lda(counts, sampler);
    put("topics.json", {{"model", to_json(model, tc.top_words)},
                        {"selection", selection},
                        {"dictionary_size", counts.terms()},
                        {"token_count", counts.token_count()},
                        {"notices", counts.notices}});
    put("topic_evolution.json", evolution_json(topic_evolution(model, corpus_, tc.evolution_threshold), tc.evolution_threshold));
    classifications_["topics"] = classify_articles_by_topics(model, labels("topics"));
    log("topic-model: K = " + std::to_string(k) + " over " + std::to_string(counts.documents()) + " documents");
  }

  void geography() {
    for (const auto& [method, c] : classifications_)
      for (const auto alloc : {Allocation::Authoring, Allocation::Studied}) {
        const auto name = method + "_" + allocation_name(alloc);
        const auto set = country_profiles(c, corpus_, alloc);
        put("profiles/" + name + ".json", to_json(set));
        if (set.profiles.empty()) {
          log("geo-profiles: " + name + ": no country profile");
          continue;
        }
        const auto k = std::min(config_.cluster_k, set.profiles.size());
        const auto clustering = cluster_countries(set, k);
        put("clusters/" + name + ".json", to_json(clustering));
        if (config_.geometry_path) {
          const auto map = export_map(clustering, std::filesystem::path(*config_.geometry_path));
          put("maps/" + name + ".geojson", map.geojson);
          put("maps/" + name + ".missing.json", map.missing);
        }
        log("geo-profiles: " + name + ": " + std::to_string(set.profiles.size()) + " countries, k = " +
            std::to_string(k) + ", inertia share " + std::to_string(clustering.inertia_share));
      }
  }

  void complementarity() {
    std::vector<std::string> present;
    for (const auto* m : kMethods)
      if (classifications_.contains(m)) present.push_back(m);
    std::uint64_t stream = 10;
    for (std::size_t i = 0; i < present.size(); ++i)
      for (std::size_t j = i + 1; j < present.size(); ++j) {
        const auto& a = classifications_.at(present[i]);
        const auto& b = classifications_.at(present[j]);
        const auto dir = "complementarity/" + present[i] + "_" + present[j] + "/";
        const auto back = "complementarity/" + present[j] + "_" + present[i] + "/";
        if (const auto shared = align(a, b).article_ids.size(); shared < 3) {
          skip("complementarity/" + present[i] + "_" + present[j],
               std::to_string(shared) + " articles classified by both methods, at least 3 needed");
          continue;
        }
        put(dir + "flows.json", to_json(flow_matrix(a, b)));
        const auto report = correlation_report(a, b, config_.bootstrap_b, derive_seed(config_.seed, stream++),
                                               config_.shuffle_fraction);
        put(dir + "correlations.json", to_json(report));
        snap_.files[dir + "correlations.csv"] = correlation_csv(report);
        put(dir + "modularity.json", to_json(modularity_curve(a, b, config_.modularity_thresholds)));
        put(back + "modularity.json", to_json(modularity_curve(b, a, config_.modularity_thresholds)));
        log("complementarity: " + present[i] + "/" + present[j] + ": max rho " + std::to_string(report.observed.max));
      }
  }

  const Corpus& corpus_;
  const PipelineConfig& config_;
  Snapshot snap_;
  std::map<std::string, Classification> classifications_;
};

}  // namespace

std::string snapshot_id(const Corpus& corpus, const PipelineConfig& config) {
  auto content = corpus_to_json(corpus);
  content.erase("provenance");
  for (auto& a : content["articles"])
    if (a["fulltext_ref"].is_string()) a["fulltext_ref"] = fulltext_digest(a["fulltext_ref"].get<std::string>());
  return sha256_hex(to_json(config).dump() + "\n" + content.dump());
}

Snapshot run_pipeline(const Corpus& corpus, const PipelineConfig& config) { return Run(corpus, config).execute(); }

}  // namespace semcorpus
