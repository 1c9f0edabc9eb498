#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "semcorpus/citation_semantics.hpp"
#include "semcorpus/common.hpp"
#include "semcorpus/corpus.hpp"
#include "semcorpus/topic_model.hpp"

namespace semcorpus {

struct TopicsConfig {
  std::string language = "fr";
  std::vector<std::size_t> candidates{2, 5, 10, 20, 25, 27, 29, 31, 33, 35, 50, 100, 200};
  std::size_t replications = 10;
  std::optional<std::size_t> fixed_k;  // skips selection
  LdaConfig sampler;
  HeldOutConfig heldout;
  PreprocessConfig preprocess;
  std::size_t top_words = 20;
  double evolution_threshold = 0.1;
};

struct PipelineConfig {
  std::uint64_t seed = 42;
  RelevanceConfig relevance;
  std::vector<FilterPoint> filter_grid;  // empty: cross product of 1,2,3,5,10 and 10,50,100,500,1000
  std::optional<std::size_t> filter_choice;
  bool include_depth2 = true;
  TopicsConfig topics;
  std::size_t cluster_k = 4;
  std::optional<std::string> geometry_path;
  std::size_t bootstrap_b = 10000;
  double shuffle_fraction = 0.5;
  std::vector<double> modularity_thresholds;  // empty: 20 between the 1st and 99th distance percentile
  std::map<std::string, std::map<std::uint32_t, std::string>> labels;  // method -> community id -> label

  std::vector<FilterPoint> effective_grid() const;
};

/// Missing keys take defaults; unknown keys are rejected.
PipelineConfig config_from_json(const nlohmann::json& j);
/// Canonical form with every key present.
nlohmann::json to_json(const PipelineConfig& c);

/// A failed run: the module error plus everything logged before it.
class PipelineError : public Error {
public:
  PipelineError(const std::string& what, std::vector<std::string> log) : Error(what), log(std::move(log)) {}
  std::vector<std::string> log;
};

struct Snapshot {
  std::string id;
  nlohmann::json config;
  std::map<std::string, std::string> files;  // relative path -> content
  std::map<std::string, std::string> skipped;  // module -> reason
  std::vector<std::string> log;
};

/// Digest of the canonical config and the corpus content, full texts included.
std::string snapshot_id(const Corpus& corpus, const PipelineConfig& config);

Snapshot run_pipeline(const Corpus& corpus, const PipelineConfig& config);

/// Directory of append-only snapshots plus the ingested corpus.
class Workspace {
public:
  explicit Workspace(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  void save_corpus(const Corpus& corpus) const;
  Corpus load_corpus() const;

  /// Writes the snapshot unless one with that id exists. Returns true if written.
  bool store(const Snapshot& snapshot, const std::string& created_at) const;
  std::vector<nlohmann::json> list() const;  // {snapshot_id, created_at}, oldest first
  bool has(const std::string& id) const;
  std::string read(const std::string& id, const std::string& file) const;
  bool exists(const std::string& id, const std::string& file) const;

  std::filesystem::path snapshot_dir(const std::string& id) const;

private:
  std::filesystem::path root_;
};

/// Exclusive flock on the workspace, held for the lifetime of the object.
class WorkspaceLock {
public:
  explicit WorkspaceLock(const Workspace& ws);
  ~WorkspaceLock();
  WorkspaceLock(const WorkspaceLock&) = delete;
  WorkspaceLock& operator=(const WorkspaceLock&) = delete;

private:
  int fd_ = -1;
};

/// Ingested corpus + config -> stored snapshot, under the workspace lock.
std::string run_and_store(const Workspace& ws, const PipelineConfig& config);

std::string utc_now();

struct Response {
  int status = 200;
  nlohmann::json body;
};

using QueryParams = std::map<std::string, std::string>;

/// Serves `/snapshots` and `/{sid}/...` resources; shared by the CLI and HTTP server.
Response query(const Workspace& ws, const std::string& path, const QueryParams& params = {});

/// Splits `path?x=1&y=2`.
std::pair<std::string, QueryParams> split_target(const std::string& target);

}  // namespace semcorpus
