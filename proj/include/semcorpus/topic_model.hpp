#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "semcorpus/classification.hpp"
#include "semcorpus/common.hpp"
#include "semcorpus/corpus.hpp"

namespace semcorpus {

enum class Pos { Noun, Determiner, Verb, Adjective, Adverb, Pronoun, Preposition, Conjunction, Numeral, Punctuation, Other };

/// Accepts universal tags (NOUN, DET, VERB, ...) and TreeTagger-style French
/// and English tags (NOM, DET:ART, VER:pres, NN, VBZ, ...). Throws on an
/// unrecognised tag.
Pos parse_pos(const std::string& tag);
std::string pos_name(Pos pos);

struct Token {
  std::string surface;
  std::string lemma;
  Pos pos = Pos::Other;
};

struct TokenStream {
  std::string article_id;
  std::vector<Token> tokens;
};

/// Lexicon-based tagger for test fixtures in French and English. Unknown
/// words are tagged as nouns; plural nouns are reduced to a singular lemma.
class FallbackTagger {
public:
  explicit FallbackTagger(std::string language);
  Token tag(const std::string& word) const;
  std::vector<Token> tag_text(const std::string& text) const;

private:
  std::string language_;
};

/// Reads a token-stream file: `surface<TAB>lemma<TAB>pos` per line, blank
/// line between documents. Single-column lines are tagged with `fallback`.
std::vector<std::vector<Token>> read_token_streams(const std::filesystem::path& path, const FallbackTagger& fallback);

/// Resolves `path` or `path#index` (0-based document index within the file).
std::vector<Token> read_fulltext(const std::string& ref, const FallbackTagger& fallback);

struct PreprocessConfig {
  bool keep_determiners = true;
};

/// Sparse document-term counts over a sorted dictionary.
struct DocTermMatrix {
  std::vector<std::string> dictionary;
  std::vector<std::string> doc_ids;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> rows;  // (term, count), term ascending
  std::vector<std::string> notices;

  std::size_t documents() const { return rows.size(); }
  std::size_t terms() const { return dictionary.size(); }
  std::uint64_t token_count() const;
};

DocTermMatrix preprocess(const std::vector<TokenStream>& streams, const PreprocessConfig& config = {});

struct WeightedDocTermMatrix {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows;
};

/// weight(t, d) = f(t, d) * ln(N / df(t)).
WeightedDocTermMatrix tfidf(const DocTermMatrix& counts);

struct LdaConfig {
  std::size_t topics = 2;
  std::optional<double> alpha;  // symmetric; default 50 / K
  double eta = 0.01;            // topic-word smoothing
  std::size_t iterations = 1000;
  std::size_t burn_in = 200;
  std::size_t thin = 10;
  std::uint64_t seed = 0;
};

struct TopicModel {
  std::size_t topics = 0;
  std::vector<double> alpha;
  double eta = 0.0;
  std::vector<std::string> dictionary;
  std::vector<std::string> doc_ids;
  Matrix beta;   // K x V
  Matrix theta;  // D x K
  std::vector<std::vector<std::uint32_t>> assignments;  // final per-token topics, tokens in term order
  std::size_t iterations = 0;
  std::size_t burn_in = 0;
  std::size_t thin = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  /// Words of topic k by descending probability.
  std::vector<std::pair<std::string, double>> top_words(std::size_t k, std::size_t m) const;
};

/// Collapsed Gibbs sampler; beta and theta averaged over thinned post-burn-in sweeps.
TopicModel fit_lda(const DocTermMatrix& counts, const LdaConfig& config);

struct HeldOutConfig {
  double fraction = 0.1;
  std::size_t fold_in_iterations = 50;
};

/// Document-completion perplexity: theta of each held-out document is folded
/// in on its even-position tokens and scored on the odd ones.
double heldout_perplexity(const TopicModel& model, const DocTermMatrix& heldout, const HeldOutConfig& config,
                          std::uint64_t seed);

/// Mean Shannon entropy (nats) of theta rows.
double mean_theta_entropy(const Matrix& theta);

struct ModelSelectionReport {
  std::vector<std::size_t> candidates;
  std::vector<double> entropy;     // mean over replications
  std::vector<double> perplexity;  // mean over replications
  std::vector<double> perplexity_sd;
  std::size_t replications = 0;
  std::size_t chosen = 0;
  LdaConfig sampler;  // iterations / burn-in / thinning used
  HeldOutConfig heldout;
};

/// Fits every candidate K on each replication's training split and picks the
/// one with minimal mean held-out perplexity (ties: smaller K).
ModelSelectionReport select_topic_count(const DocTermMatrix& counts, const std::vector<std::size_t>& candidates,
                                        std::size_t replications, std::uint64_t seed, const LdaConfig& sampler = {},
                                        const HeldOutConfig& heldout = {});

/// year -> per-topic number of documents with theta(d, k) >= threshold.
std::map<int, std::vector<std::size_t>> topic_evolution(const TopicModel& model, const Corpus& corpus, double threshold);

Classification classify_articles_by_topics(const TopicModel& model,
                                           const std::map<std::uint32_t, std::string>& labels = {});

nlohmann::json to_json(const TopicModel& model, std::size_t top_m = 20);
nlohmann::json to_json(const ModelSelectionReport& report);
nlohmann::json evolution_json(const std::map<int, std::vector<std::size_t>>& evolution, double threshold);

/// Reconstructs the parts of a model needed for evolution queries from its export.
TopicModel topic_model_from_json(const nlohmann::json& j);

}  // namespace semcorpus
