#include "semcorpus/complementarity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "semcorpus/csv.hpp"
#include "semcorpus/kernels.hpp"

namespace semcorpus {
namespace {

Matrix permute_rows(const Matrix& m, const std::vector<std::size_t>& order) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) std::copy(m.row(order[r]).begin(), m.row(order[r]).end(), out.row(r).begin());
  return out;
}

std::vector<std::size_t> full_shuffle(std::size_t n, Rng& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  return order;
}

// Picks round(fraction * n) rows and permutes them among themselves.
std::vector<std::size_t> partial_shuffle(std::size_t n, double fraction, Rng& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto pool = order;
  rng.shuffle(pool);
  pool.resize(static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n))));
  auto targets = pool;
  rng.shuffle(targets);
  for (std::size_t i = 0; i < pool.size(); ++i) order[pool[i]] = targets[i];
  return order;
}

NullBand band(const std::vector<Aggregates>& draws) {
  NullBand b;
  b.draws = draws.size();
  const double n = static_cast<double>(draws.size());
  auto stat = [&](double Aggregates::*field, double& mean, double& sd) {
    mean = 0.0;
    for (const auto& d : draws) mean += d.*field;
    mean /= n;
    double var = 0.0;
    for (const auto& d : draws) var += (d.*field - mean) * (d.*field - mean);
    sd = draws.size() > 1 ? std::sqrt(var / (n - 1)) : 0.0;
  };
  stat(&Aggregates::min, b.mean.min, b.sd.min);
  stat(&Aggregates::max, b.mean.max, b.sd.max);
  stat(&Aggregates::mean_abs, b.mean.mean_abs, b.sd.mean_abs);
  return b;
}

std::optional<double> defined(double x) { return std::isfinite(x) ? std::optional<double>(x) : std::nullopt; }

nlohmann::json optional_json(const std::optional<double>& x) { return x ? nlohmann::json(*x) : nlohmann::json(nullptr); }

nlohmann::json aggregates_json(const Aggregates& a) {
  return {{"min", a.min}, {"max", a.max}, {"mean_abs", a.mean_abs}};
}

nlohmann::json band_json(const NullBand& b) {
  return {{"mean", aggregates_json(b.mean)}, {"sd", aggregates_json(b.sd)}, {"draws", b.draws}};
}

}  // namespace

AlignedPair align(const Classification& a, const Classification& b) {
  std::map<std::string, std::size_t> rows_b;
  for (std::size_t r = 0; r < b.article_ids.size(); ++r)
    if (!b.unclassified[r]) rows_b.emplace(b.article_ids[r], r);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t classified_a = 0;
  for (std::size_t r = 0; r < a.article_ids.size(); ++r) {
    if (a.unclassified[r]) continue;
    ++classified_a;
    if (const auto it = rows_b.find(a.article_ids[r]); it != rows_b.end()) pairs.emplace_back(r, it->second);
  }
  AlignedPair out;
  out.a = Matrix(pairs.size(), a.categories.size());
  out.b = Matrix(pairs.size(), b.categories.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.article_ids.push_back(a.article_ids[pairs[i].first]);
    std::copy(a.shares.row(pairs[i].first).begin(), a.shares.row(pairs[i].first).end(), out.a.row(i).begin());
    std::copy(b.shares.row(pairs[i].second).begin(), b.shares.row(pairs[i].second).end(), out.b.row(i).begin());
  }
  out.only_a = classified_a - pairs.size();
  out.only_b = rows_b.size() - pairs.size();
  return out;
}

double FlowMatrix::total() const { return std::accumulate(flows.data().begin(), flows.data().end(), 0.0); }

FlowMatrix flow_matrix(const Classification& a, const Classification& b) {
  const auto pair = align(a, b);
  if (pair.article_ids.empty())
    throw InputError("no article is classified by both " + a.method + " and " + b.method);
  FlowMatrix f;
  f.method_a = a.method;
  f.method_b = b.method;
  f.categories_a = a.categories;
  f.categories_b = b.categories;
  f.flows = kernels::cross_products(pair.a, pair.b);
  f.shared_articles = pair.article_ids.size();
  if (pair.only_a || pair.only_b)
    f.notices.push_back(std::to_string(pair.article_ids.size()) + " shared articles; " + std::to_string(pair.only_a) +
                        " classified only by " + a.method + ", " + std::to_string(pair.only_b) + " only by " + b.method);
  return f;
}

Aggregates aggregate(const Matrix& rho) {
  Aggregates g{INFINITY, -INFINITY, 0.0};
  std::size_t n = 0;
  for (const double x : rho.data()) {
    if (std::isnan(x)) continue;
    g.min = std::min(g.min, x);
    g.max = std::max(g.max, x);
    g.mean_abs += std::abs(x);
    ++n;
  }
  if (n == 0) throw InputError("no defined correlation: every column pair involves a constant column");
  g.mean_abs /= static_cast<double>(n);
  return g;
}

CorrelationReport correlation_report(const Classification& a, const Classification& b, std::size_t b_reps,
                                     std::uint64_t seed, double shuffle_fraction) {
  if (b_reps < 1) throw InputError("correlation_report: b must be at least 1");
  if (!(shuffle_fraction > 0.0 && shuffle_fraction <= 1.0))
    throw InputError("correlation_report: shuffle fraction must lie in (0, 1]");
  const auto pair = align(a, b);
  const std::size_t n = pair.article_ids.size();
  if (n < 3) throw InputError("correlation_report: needs at least 3 shared articles, got " + std::to_string(n));

  CorrelationReport r;
  r.method_a = a.method;
  r.method_b = b.method;
  r.categories_a = a.categories;
  r.categories_b = b.categories;
  r.b = b_reps;
  r.shuffle_fraction = shuffle_fraction;
  r.seed = seed;
  r.shared_articles = n;
  r.rho = kernels::column_correlation(pair.a, pair.b);
  for (const double x : r.rho.data()) r.undefined += std::isnan(x);
  if (r.undefined)
    r.notices.push_back(std::to_string(r.undefined) + " correlations undefined (constant column), excluded from aggregates");
  r.observed = aggregate(r.rho);

  std::vector<Aggregates> lower(b_reps), upper(2 * b_reps);
  std::vector<std::string> errors(b_reps);
#pragma omp parallel for schedule(static)
  for (std::size_t rep = 0; rep < b_reps; ++rep) {
    try {
      Rng rng(derive_seed(seed, rep));
      // rho_0 alternates which side is shuffled
      if (rep % 2 == 0)
        lower[rep] = aggregate(kernels::serial::column_correlation(permute_rows(pair.a, full_shuffle(n, rng)), pair.b));
      else
        lower[rep] = aggregate(kernels::serial::column_correlation(pair.a, permute_rows(pair.b, full_shuffle(n, rng))));
      upper[2 * rep] = aggregate(
          kernels::serial::column_correlation(pair.a, permute_rows(pair.a, partial_shuffle(n, shuffle_fraction, rng))));
      upper[2 * rep + 1] = aggregate(
          kernels::serial::column_correlation(pair.b, permute_rows(pair.b, partial_shuffle(n, shuffle_fraction, rng))));
    } catch (const std::exception& e) {
      errors[rep] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw InputError(e);
  r.null_lower = band(lower);
  r.null_upper = band(upper);
  return r;
}

std::vector<double> default_thresholds(const Matrix& points, std::size_t count) {
  auto d = kernels::pairwise_distances(points);
  if (d.empty()) throw InputError("default_thresholds: needs at least two rows");
  std::sort(d.begin(), d.end());
  auto percentile = [&](double p) {
    const double pos = p * static_cast<double>(d.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, d.size() - 1);
    return d[lo] + (pos - static_cast<double>(lo)) * (d[hi] - d[lo]);
  };
  const double lo = percentile(0.01), hi = percentile(0.99);
  if (!(hi > lo) || count < 2) return {hi > 0.0 ? hi : percentile(1.0)};
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

ModularityCurve modularity_curve(const Classification& a, const Classification& b, std::vector<double> thresholds) {
  const auto pair = align(a, b);
  if (pair.article_ids.size() < 2) throw InputError("modularity_curve: needs at least 2 shared articles");
  if (thresholds.empty()) {
    thresholds = default_thresholds(pair.b);
  } else {
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
      if (!(thresholds[i] > 0.0)) throw InputError("modularity_curve: thresholds must be positive");
      if (i > 0 && !(thresholds[i] > thresholds[i - 1]))
        throw InputError("modularity_curve: thresholds must be strictly ascending");
    }
  }
  ModularityCurve c;
  c.method_a = a.method;
  c.method_b = b.method;
  c.thresholds = thresholds;
  bool any_edge = false;
  for (const double theta : thresholds) {
    const auto adj = kernels::threshold_network(pair.b, theta);
    std::size_t degree_sum = 0;
    for (const auto& nb : adj) degree_sum += nb.size();
    c.edges.push_back(degree_sum / 2);
    if (degree_sum == 0) {
      c.modularity_a.push_back(std::nullopt);
      c.modularity_b.push_back(std::nullopt);
      c.relative.push_back(std::nullopt);
      continue;
    }
    any_edge = true;
    const auto qa = defined(kernels::soft_modularity(adj, pair.a));
    const auto qb = defined(kernels::soft_modularity(adj, pair.b));
    c.modularity_a.push_back(qa);
    c.modularity_b.push_back(qb);
    c.relative.push_back(qa && qb && *qb > 0.0 ? std::optional<double>(*qa / *qb) : std::nullopt);
  }
  if (!any_edge) throw InputError("modularity_curve: every threshold yields an empty network");
  return c;
}

nlohmann::json to_json(const FlowMatrix& f) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < f.flows.rows(); ++i) {
    const auto row = f.flows.row(i);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return {{"method_a", f.method_a},         {"method_b", f.method_b},
          {"categories_a", f.categories_a}, {"categories_b", f.categories_b},
          {"flows", rows},                  {"total", f.total()},
          {"shared_articles", f.shared_articles}, {"notices", f.notices},
          {"sankey", sankey_json(f)}};
}

nlohmann::json sankey_json(const FlowMatrix& f) {
  nlohmann::json nodes = nlohmann::json::array(), links = nlohmann::json::array();
  const std::size_t n = f.flows.rows(), m = f.flows.cols();
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = f.flows.row(i);
    nodes.push_back({{"method", f.method_a}, {"category", f.categories_a[i]}, {"size", std::accumulate(row.begin(), row.end(), 0.0)}});
  }
  for (std::size_t j = 0; j < m; ++j) {
    double size = 0.0;
    for (std::size_t i = 0; i < n; ++i) size += f.flows(i, j);
    nodes.push_back({{"method", f.method_b}, {"category", f.categories_b[j]}, {"size", size}});
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (f.flows(i, j) > 0.0) links.push_back({{"source", i}, {"target", n + j}, {"value", f.flows(i, j)}});
  return {{"nodes", nodes}, {"links", links}};
}

nlohmann::json to_json(const CorrelationReport& r) {
  nlohmann::json rho = nlohmann::json::array();
  for (std::size_t i = 0; i < r.rho.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (const double x : r.rho.row(i)) row.push_back(optional_json(defined(x)));
    rho.push_back(row);
  }
  return {{"method_a", r.method_a},
          {"method_b", r.method_b},
          {"categories_a", r.categories_a},
          {"categories_b", r.categories_b},
          {"rho", rho},
          {"rho_aggregates", aggregates_json(r.observed)},
          {"undefined", r.undefined},
          {"rho0", band_json(r.null_lower)},
          {"rho_plus", band_json(r.null_upper)},
          {"b", r.b},
          {"shuffle_fraction", r.shuffle_fraction},
          {"seed", r.seed},
          {"shared_articles", r.shared_articles},
          {"sd_definition", "over repetitions; rho_plus pools both matrices, 2b draws"},
          {"notices", r.notices}};
}

std::string correlation_csv(const CorrelationReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << csv::escape(r.method_a + "\\" + r.method_b);
  for (const auto& c : r.categories_b) out << ',' << csv::escape(c);
  out << '\n';
  for (std::size_t i = 0; i < r.rho.rows(); ++i) {
    out << csv::escape(r.categories_a[i]);
    for (const double x : r.rho.row(i)) {
      out << ',';
      if (!std::isnan(x)) out << x;
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const ModularityCurve& c) {
  nlohmann::json points = nlohmann::json::array();
  for (std::size_t i = 0; i < c.thresholds.size(); ++i)
    points.push_back({{"threshold", c.thresholds[i]},
                      {"edges", c.edges[i]},
                      {"modularity_a", optional_json(c.modularity_a[i])},
                      {"modularity_b", optional_json(c.modularity_b[i])},
                      {"relative_modularity", optional_json(c.relative[i])}});
  return {{"method_a", c.method_a}, {"method_b", c.method_b}, {"points", points}};
}

}  // namespace semcorpus
