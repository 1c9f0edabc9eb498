#include "semcorpus/topic_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace semcorpus {
namespace {

bool retained(Pos pos, const PreprocessConfig& config) {
  return pos == Pos::Noun || pos == Pos::Verb || (config.keep_determiners && pos == Pos::Determiner);
}

// Term ids of every token of row d, in term order.
std::vector<std::uint32_t> expand(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& row) {
  std::vector<std::uint32_t> out;
  for (const auto& [t, n] : row) out.insert(out.end(), n, t);
  return out;
}

std::size_t sample(Rng& rng, const std::vector<double>& cumulative) {
  const double u = rng.uniform() * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);
}

void normalize_rows(Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    const double s = std::accumulate(row.begin(), row.end(), 0.0);
    for (auto& x : row) x /= s;
  }
}

DocTermMatrix subset(const DocTermMatrix& counts, const std::vector<std::size_t>& docs) {
  DocTermMatrix out;
  out.dictionary = counts.dictionary;
  for (const auto d : docs) {
    out.doc_ids.push_back(counts.doc_ids[d]);
    out.rows.push_back(counts.rows[d]);
  }
  return out;
}

}  // namespace

std::uint64_t DocTermMatrix::token_count() const {
  std::uint64_t n = 0;
  for (const auto& row : rows)
    for (const auto& [t, c] : row) n += c;
  return n;
}

DocTermMatrix preprocess(const std::vector<TokenStream>& streams, const PreprocessConfig& config) {
  DocTermMatrix out;
  std::vector<std::map<std::string, std::uint32_t>> bags;
  std::map<std::string, std::uint32_t> vocabulary;
  for (const auto& s : streams) {
    std::map<std::string, std::uint32_t> bag;
    for (const auto& tok : s.tokens) {
      if (tok.lemma.empty()) throw InputError("article " + s.article_id + ": empty lemma");
      if (retained(tok.pos, config)) ++bag[tok.lemma];
    }
    if (bag.empty()) {
      out.notices.push_back("article " + s.article_id + ": no retained tokens, excluded");
      continue;
    }
    for (const auto& [w, n] : bag) vocabulary.emplace(w, 0);
    out.doc_ids.push_back(s.article_id);
    bags.push_back(std::move(bag));
  }
  if (bags.empty()) throw InputError("preprocess: no document has retained tokens");
  std::uint32_t id = 0;
  for (auto& [w, i] : vocabulary) {
    i = id++;
    out.dictionary.push_back(w);
  }
  for (const auto& bag : bags) {
    auto& row = out.rows.emplace_back();
    for (const auto& [w, n] : bag) row.emplace_back(vocabulary.at(w), n);
  }
  return out;
}

WeightedDocTermMatrix tfidf(const DocTermMatrix& counts) {
  std::vector<std::size_t> df(counts.terms(), 0);
  for (const auto& row : counts.rows)
    for (const auto& [t, c] : row) ++df[t];
  const double n = static_cast<double>(counts.documents());
  WeightedDocTermMatrix out;
  out.rows.reserve(counts.documents());
  for (const auto& row : counts.rows) {
    auto& w = out.rows.emplace_back();
    for (const auto& [t, c] : row) {
      // ln(N / N) is exactly zero, but say so rather than rely on the division
      const double idf = df[t] == counts.documents() ? 0.0 : std::log(n / static_cast<double>(df[t]));
      w.emplace_back(t, static_cast<double>(c) * idf);
    }
  }
  return out;
}

std::vector<std::pair<std::string, double>> TopicModel::top_words(std::size_t k, std::size_t m) const {
  if (k >= topics) throw NotFound("topic " + std::to_string(k) + " does not exist");
  std::vector<std::size_t> order(beta.cols());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t take = std::min(m, order.size());
  std::partial_sort(order.begin(), order.begin() + take, order.end(), [&](std::size_t a, std::size_t b) {
    return beta(k, a) != beta(k, b) ? beta(k, a) > beta(k, b) : a < b;
  });
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < take; ++i) out.emplace_back(dictionary[order[i]], beta(k, order[i]));
  return out;
}

TopicModel fit_lda(const DocTermMatrix& counts, const LdaConfig& config) {
  const std::size_t k_count = config.topics;
  const std::size_t v = counts.terms();
  const std::size_t d_count = counts.documents();
  if (k_count < 1) throw InputError("fit_lda: K must be at least 1");
  if (d_count == 0 || counts.token_count() == 0) throw InputError("fit_lda: empty document-term matrix");
  if (k_count > v)
    throw InputError("fit_lda: K = " + std::to_string(k_count) + " exceeds dictionary size " + std::to_string(v));
  if (config.iterations <= config.burn_in)
    throw InputError("fit_lda: iterations (" + std::to_string(config.iterations) + ") must exceed burn-in (" +
                     std::to_string(config.burn_in) + ")");
  if (config.thin < 1) throw InputError("fit_lda: thinning must be at least 1");
  const double alpha = config.alpha.value_or(50.0 / static_cast<double>(k_count));
  if (!(alpha > 0.0) || !(config.eta > 0.0)) throw InputError("fit_lda: alpha and eta must be positive");

  TopicModel model;
  model.topics = k_count;
  model.alpha.assign(k_count, alpha);
  model.eta = config.eta;
  model.dictionary = counts.dictionary;
  model.doc_ids = counts.doc_ids;
  model.iterations = config.iterations;
  model.burn_in = config.burn_in;
  model.thin = config.thin;
  model.seed = config.seed;

  Rng rng(config.seed);
  std::vector<std::vector<std::uint32_t>> words(d_count);
  auto& z = model.assignments;
  z.resize(d_count);
  std::vector<std::uint32_t> n_dk(d_count * k_count, 0), n_kw(k_count * v, 0), n_k(k_count, 0);
  for (std::size_t d = 0; d < d_count; ++d) {
    words[d] = expand(counts.rows[d]);
    z[d].resize(words[d].size());
    for (std::size_t i = 0; i < words[d].size(); ++i) {
      const auto k = static_cast<std::uint32_t>(rng.below(k_count));
      z[d][i] = k;
      ++n_dk[d * k_count + k];
      ++n_kw[k * v + words[d][i]];
      ++n_k[k];
    }
  }

  const double v_eta = static_cast<double>(v) * config.eta;
  Matrix beta_sum(k_count, v), theta_sum(d_count, k_count);
  std::vector<double> cumulative(k_count);
  auto accumulate_sample = [&] {
    for (std::size_t k = 0; k < k_count; ++k) {
      const double denom = static_cast<double>(n_k[k]) + v_eta;
      for (std::size_t w = 0; w < v; ++w) beta_sum(k, w) += (n_kw[k * v + w] + config.eta) / denom;
    }
    for (std::size_t d = 0; d < d_count; ++d) {
      const double denom = static_cast<double>(words[d].size()) + alpha * static_cast<double>(k_count);
      for (std::size_t k = 0; k < k_count; ++k) theta_sum(d, k) += (n_dk[d * k_count + k] + alpha) / denom;
    }
    ++model.samples;
  };

  for (std::size_t sweep = 1; sweep <= config.iterations; ++sweep) {
    for (std::size_t d = 0; d < d_count; ++d) {
      auto* nd = &n_dk[d * k_count];
      for (std::size_t i = 0; i < words[d].size(); ++i) {
        const auto w = words[d][i];
        auto k = z[d][i];
        --nd[k];
        --n_kw[k * v + w];
        --n_k[k];
        double acc = 0.0;
        for (std::size_t t = 0; t < k_count; ++t) {
          acc += (nd[t] + alpha) * (n_kw[t * v + w] + config.eta) / (n_k[t] + v_eta);
          cumulative[t] = acc;
        }
        k = static_cast<std::uint32_t>(sample(rng, cumulative));
        z[d][i] = k;
        ++nd[k];
        ++n_kw[k * v + w];
        ++n_k[k];
      }
    }
    const std::size_t after = sweep - config.burn_in;
    if (sweep > config.burn_in && (after % config.thin == 0 || (sweep == config.iterations && model.samples == 0)))
      accumulate_sample();
  }

  normalize_rows(beta_sum);
  normalize_rows(theta_sum);
  model.beta = std::move(beta_sum);
  model.theta = std::move(theta_sum);
  return model;
}

double heldout_perplexity(const TopicModel& model, const DocTermMatrix& heldout, const HeldOutConfig& config,
                          std::uint64_t seed) {
  std::map<std::string, std::uint32_t, std::less<>> index;
  for (std::uint32_t i = 0; i < model.dictionary.size(); ++i) index.emplace(model.dictionary[i], i);
  std::vector<std::int64_t> remap(heldout.terms(), -1);
  for (std::size_t t = 0; t < heldout.terms(); ++t)
    if (const auto it = index.find(heldout.dictionary[t]); it != index.end()) remap[t] = it->second;

  const std::size_t k_count = model.topics;
  const double alpha_sum = std::accumulate(model.alpha.begin(), model.alpha.end(), 0.0);
  const std::size_t burn = config.fold_in_iterations / 2;
  Rng rng(seed);
  std::vector<double> cumulative(k_count);
  double log_likelihood = 0.0;
  std::uint64_t scored = 0;

  for (const auto& row : heldout.rows) {
    std::vector<std::uint32_t> fold, score;
    const auto tokens = expand(row);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (remap[tokens[i]] < 0) continue;
      (i % 2 == 0 ? fold : score).push_back(static_cast<std::uint32_t>(remap[tokens[i]]));
    }
    if (score.empty()) continue;

    std::vector<std::uint32_t> n_k(k_count, 0), z(fold.size());
    for (std::size_t i = 0; i < fold.size(); ++i) ++n_k[z[i] = static_cast<std::uint32_t>(rng.below(k_count))];
    std::vector<double> theta(k_count, 0.0);
    std::size_t samples = 0;
    for (std::size_t sweep = 1; sweep <= config.fold_in_iterations; ++sweep) {
      for (std::size_t i = 0; i < fold.size(); ++i) {
        --n_k[z[i]];
        double acc = 0.0;
        for (std::size_t t = 0; t < k_count; ++t) {
          acc += (n_k[t] + model.alpha[t]) * model.beta(t, fold[i]);
          cumulative[t] = acc;
        }
        z[i] = static_cast<std::uint32_t>(sample(rng, cumulative));
        ++n_k[z[i]];
      }
      if (sweep > burn) {
        for (std::size_t t = 0; t < k_count; ++t)
          theta[t] += (n_k[t] + model.alpha[t]) / (static_cast<double>(fold.size()) + alpha_sum);
        ++samples;
      }
    }
    if (samples == 0)
      for (std::size_t t = 0; t < k_count; ++t) theta[t] = model.alpha[t] / alpha_sum;
    else
      for (auto& x : theta) x /= static_cast<double>(samples);

    for (const auto w : score) {
      double p = 0.0;
      for (std::size_t t = 0; t < k_count; ++t) p += theta[t] * model.beta(t, w);
      log_likelihood += std::log(p);
      ++scored;
    }
  }
  if (scored == 0) throw InputError("heldout_perplexity: no scorable held-out tokens");
  return std::exp(-log_likelihood / static_cast<double>(scored));
}

double mean_theta_entropy(const Matrix& theta) {
  if (theta.rows() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t d = 0; d < theta.rows(); ++d)
    for (const double p : theta.row(d))
      if (p > 0.0) total -= p * std::log(p);
  return total / static_cast<double>(theta.rows());
}

ModelSelectionReport select_topic_count(const DocTermMatrix& counts, const std::vector<std::size_t>& candidates,
                                        std::size_t replications, std::uint64_t seed, const LdaConfig& sampler,
                                        const HeldOutConfig& heldout) {
  if (candidates.empty()) throw InputError("select_topic_count: no candidates");
  if (replications < 1) throw InputError("select_topic_count: replications must be at least 1");
  if (!(heldout.fraction > 0.0 && heldout.fraction < 1.0))
    throw InputError("select_topic_count: held-out fraction must lie in (0, 1)");
  const std::size_t d_count = counts.documents();
  const auto n_held = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(heldout.fraction * d_count)));
  if (n_held >= d_count) throw InputError("select_topic_count: too few documents for a held-out split");

  std::vector<DocTermMatrix> train(replications), test(replications);
  for (std::size_t r = 0; r < replications; ++r) {
    std::vector<std::size_t> order(d_count);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(seed, r));
    rng.shuffle(order);
    std::vector<std::size_t> held(order.begin(), order.begin() + n_held), kept(order.begin() + n_held, order.end());
    std::sort(held.begin(), held.end());
    std::sort(kept.begin(), kept.end());
    test[r] = subset(counts, held);
    train[r] = subset(counts, kept);
  }

  const std::size_t c_count = candidates.size();
  const std::size_t jobs = c_count * replications;
  std::vector<double> entropy(jobs), perplexity(jobs);
  std::vector<std::string> errors(jobs);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t j = 0; j < jobs; ++j) {
    const std::size_t c = j / replications, r = j % replications;
    try {
      LdaConfig cfg = sampler;
      cfg.topics = candidates[c];
      cfg.alpha.reset();
      if (sampler.alpha) cfg.alpha = sampler.alpha;
      const auto stream = derive_seed(seed, 0x10000 + r);
      cfg.seed = derive_seed(stream, candidates[c]);
      const auto model = fit_lda(train[r], cfg);
      entropy[j] = mean_theta_entropy(model.theta);
      perplexity[j] = heldout_perplexity(model, test[r], heldout, derive_seed(cfg.seed, 1));
    } catch (const std::exception& e) {
      errors[j] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw InputError(e);

  ModelSelectionReport report;
  report.candidates = candidates;
  report.replications = replications;
  report.sampler = sampler;
  report.heldout = heldout;
  for (std::size_t c = 0; c < c_count; ++c) {
    double e = 0.0, p = 0.0;
    for (std::size_t r = 0; r < replications; ++r) {
      e += entropy[c * replications + r];
      p += perplexity[c * replications + r];
    }
    e /= static_cast<double>(replications);
    p /= static_cast<double>(replications);
    double var = 0.0;
    for (std::size_t r = 0; r < replications; ++r) var += std::pow(perplexity[c * replications + r] - p, 2);
    report.entropy.push_back(e);
    report.perplexity.push_back(p);
    report.perplexity_sd.push_back(replications > 1 ? std::sqrt(var / static_cast<double>(replications - 1)) : 0.0);
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < c_count; ++c) {
    const bool lower = report.perplexity[c] < report.perplexity[best];
    const bool tie = report.perplexity[c] == report.perplexity[best] && candidates[c] < candidates[best];
    if (lower || tie) best = c;
  }
  report.chosen = candidates[best];
  return report;
}

std::map<int, std::vector<std::size_t>> topic_evolution(const TopicModel& model, const Corpus& corpus,
                                                         double threshold) {
  std::map<int, std::vector<std::size_t>> out;
  for (std::size_t d = 0; d < model.doc_ids.size(); ++d) {
    const Article* a = corpus.find(model.doc_ids[d]);
    if (!a) throw NotFound("topic model document '" + model.doc_ids[d] + "' is not in the corpus");
    auto& counts = out[a->year];
    counts.resize(model.topics, 0);
    for (std::size_t k = 0; k < model.topics; ++k)
      if (model.theta(d, k) >= threshold) ++counts[k];
  }
  return out;
}

Classification classify_articles_by_topics(const TopicModel& model, const std::map<std::uint32_t, std::string>& labels) {
  Classification c;
  c.method = "topics";
  c.article_ids = model.doc_ids;
  for (std::uint32_t k = 0; k < model.topics; ++k) {
    const auto it = labels.find(k);
    if (it != labels.end()) {
      c.categories.push_back(it->second);
      continue;
    }
    const auto top = model.top_words(k, 1);
    c.categories.push_back(std::to_string(k) + ":" + (top.empty() ? std::string{} : top.front().first));
  }
  c.shares = model.theta;
  c.unclassified.assign(model.doc_ids.size(), false);
  return c;
}

nlohmann::json to_json(const TopicModel& model, std::size_t top_m) {
  nlohmann::json topics = nlohmann::json::array();
  for (std::size_t k = 0; k < model.topics; ++k) {
    nlohmann::json words = nlohmann::json::array();
    for (const auto& [w, p] : model.top_words(k, top_m)) words.push_back({{"word", w}, {"probability", p}});
    topics.push_back({{"topic", k}, {"top_words", words}});
  }
  nlohmann::json theta = nlohmann::json::array();
  for (std::size_t d = 0; d < model.doc_ids.size(); ++d) {
    auto row = model.theta.row(d);
    theta.push_back({{"article_id", model.doc_ids[d]}, {"shares", std::vector<double>(row.begin(), row.end())}});
  }
  return {{"K", model.topics},
          {"alpha", model.alpha},
          {"eta", model.eta},
          {"dictionary_size", model.dictionary.size()},
          {"iterations", model.iterations},
          {"burn_in", model.burn_in},
          {"thin", model.thin},
          {"samples", model.samples},
          {"seed", model.seed},
          {"top_m", top_m},
          {"topics", topics},
          {"theta", theta}};
}

nlohmann::json to_json(const ModelSelectionReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t c = 0; c < report.candidates.size(); ++c)
    rows.push_back({{"K", report.candidates[c]},
                    {"entropy", report.entropy[c]},
                    {"perplexity", report.perplexity[c]},
                    {"perplexity_sd", report.perplexity_sd[c]}});
  return {{"candidates", rows},
          {"replications", report.replications},
          {"chosen_K", report.chosen},
          {"criterion", "minimum mean held-out perplexity"},
          {"entropy_definition", "mean Shannon entropy (nats) of per-document theta rows"},
          {"perplexity_definition", "document completion: fold in on even-position tokens, score odd-position tokens"},
          {"sampler",
           {{"iterations", report.sampler.iterations},
            {"burn_in", report.sampler.burn_in},
            {"thin", report.sampler.thin},
            {"eta", report.sampler.eta},
            {"alpha", report.sampler.alpha ? nlohmann::json(*report.sampler.alpha) : nlohmann::json("50/K")}}},
          {"heldout", {{"fraction", report.heldout.fraction}, {"fold_in_iterations", report.heldout.fold_in_iterations}}}};
}

nlohmann::json evolution_json(const std::map<int, std::vector<std::size_t>>& evolution, double threshold) {
  nlohmann::json years = nlohmann::json::array();
  for (const auto& [y, counts] : evolution) years.push_back({{"year", y}, {"counts", counts}});
  return {{"threshold", threshold}, {"years", years}};
}

TopicModel topic_model_from_json(const nlohmann::json& j) {
  try {
    TopicModel m;
    m.topics = j.at("K").get<std::size_t>();
    m.alpha = j.at("alpha").get<std::vector<double>>();
    m.eta = j.at("eta").get<double>();
    m.iterations = j.at("iterations").get<std::size_t>();
    m.burn_in = j.at("burn_in").get<std::size_t>();
    m.thin = j.at("thin").get<std::size_t>();
    m.samples = j.at("samples").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    const auto& theta = j.at("theta");
    m.theta = Matrix(theta.size(), m.topics);
    for (std::size_t d = 0; d < theta.size(); ++d) {
      m.doc_ids.push_back(theta[d].at("article_id").get<std::string>());
      const auto shares = theta[d].at("shares").get<std::vector<double>>();
      if (shares.size() != m.topics) throw InputError("theta row of '" + m.doc_ids.back() + "' has wrong length");
      std::copy(shares.begin(), shares.end(), m.theta.row(d).begin());
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed topic model export: ") + e.what());
  }
}

}  // namespace semcorpus
