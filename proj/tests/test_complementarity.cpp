#include <doctest.h>

#include <cmath>
#include <numeric>

#include "semcorpus/complementarity.hpp"

using namespace semcorpus;

namespace {

Classification make(const std::string& method, const std::vector<std::vector<double>>& rows,
                    const std::string& prefix = "a") {
  Classification c;
  c.method = method;
  for (std::size_t j = 0; j < rows[0].size(); ++j) c.categories.push_back(method + std::to_string(j));
  c.shares = Matrix(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    c.article_ids.push_back(prefix + std::to_string(i));
    for (std::size_t j = 0; j < rows[i].size(); ++j) c.shares(i, j) = rows[i][j];
  }
  c.unclassified.assign(rows.size(), false);
  return c;
}

std::vector<std::vector<double>> random_stochastic(std::size_t n, std::size_t m, Rng& rng) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(m));
  for (auto& r : rows) {
    for (auto& x : r) x = rng.uniform();
    const double s = std::accumulate(r.begin(), r.end(), 0.0);
    for (auto& x : r) x /= s;
  }
  return rows;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n, my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// Direct double sum of the soft modularity on b's threshold network.
double modularity_oracle(const Matrix& points, const Matrix& member, double theta) {
  const std::size_t n = points.rows();
  std::vector<std::vector<int>> adj(n, std::vector<int>(n, 0));
  std::vector<double> k(n, 0.0);
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double d = 0.0;
      for (std::size_t t = 0; t < points.cols(); ++t) d += std::pow(points(i, t) - points(j, t), 2);
      adj[i][j] = std::sqrt(d) < theta;
      k[i] += adj[i][j];
      two_m += adj[i][j];
    }
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double overlap = 0.0;
      for (std::size_t c = 0; c < member.cols(); ++c) overlap += member(i, c) * member(j, c);
      q += (adj[i][j] - k[i] * k[j] / two_m) * overlap;
    }
  return q / two_m;
}

}  // namespace

TEST_CASE("flow of a single article") {
  const auto f = flow_matrix(make("a", {{0.5, 0.5}}), make("b", {{1.0, 0.0}}));
  CHECK(f.flows(0, 0) == 0.5);
  CHECK(f.flows(0, 1) == 0.0);
  CHECK(f.flows(1, 0) == 0.5);
  CHECK(f.flows(1, 1) == 0.0);
}

TEST_CASE("identical hard classifications give a diagonal flow") {
  const auto c = make("a", {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  const auto f = flow_matrix(c, c);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(f.flows(i, j) == (i == j ? (i == 0 ? 2.0 : 1.0) : 0.0));
}

TEST_CASE("flow conservation and transpose symmetry") {
  Rng rng(7);
  const auto a = make("keywords", random_stochastic(737, 10, rng));
  const auto b = make("citations", random_stochastic(737, 12, rng));
  const auto ab = flow_matrix(a, b), ba = flow_matrix(b, a);
  CHECK(std::abs(ab.total() - 737.0) <= 1e-6 * 737.0);
  CHECK(ab.flows == ba.flows.transposed());
  const auto s = sankey_json(ab);
  CHECK(s["nodes"].size() == 22);
  CHECK(s["links"].size() == 120);
}

TEST_CASE("flow over the article intersection") {
  auto a = make("a", {{1, 0}, {0, 1}, {1, 0}});
  auto b = make("b", {{1, 0}, {0, 1}}, "a");
  b.article_ids = {"a2", "zz"};
  auto f = flow_matrix(a, b);
  CHECK(f.shared_articles == 1);
  CHECK(f.total() == 1.0);
  CHECK(f.notices.size() == 1);
  a.unclassified[2] = true;
  CHECK_THROWS_AS(flow_matrix(a, b), InputError);
}

TEST_CASE("self correlation") {
  Rng rng(2);
  const auto a = make("a", random_stochastic(50, 4, rng));
  const auto r = correlation_report(a, a, 20, 1);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(r.rho(i, i) - 1.0) <= 1e-12);
  CHECK(std::abs(r.observed.max - 1.0) <= 1e-12);
  CHECK(r.undefined == 0);
}

TEST_CASE("correlation entries, swap symmetry, constant columns") {
  Rng rng(5);
  auto rows_a = random_stochastic(40, 3, rng);
  auto rows_b = random_stochastic(40, 4, rng);
  for (auto& r : rows_b) {
    r[3] = 0.0;
    const double s = r[0] + r[1] + r[2];
    for (int j = 0; j < 3; ++j) r[j] /= s;
  }
  const auto a = make("a", rows_a), b = make("b", rows_b);
  const auto r = correlation_report(a, b, 10, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      std::vector<double> x, y;
      for (std::size_t d = 0; d < 40; ++d) x.push_back(rows_a[d][i]), y.push_back(rows_b[d][j]);
      CHECK(r.rho(i, j) == doctest::Approx(pearson(x, y)).epsilon(1e-12));
    }
  CHECK(r.undefined == 3);
  CHECK(std::isnan(r.rho(0, 3)));
  const auto swapped = correlation_report(b, a, 10, 3);
  CHECK(swapped.observed.max == r.observed.max);
  CHECK(swapped.observed.mean_abs == doctest::Approx(r.observed.mean_abs).epsilon(1e-14));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(swapped.rho(j, i) == r.rho(i, j));
  CHECK(correlation_csv(r).find(",\n") != std::string::npos);
  CHECK(to_json(r)["rho"][0][3].is_null());

  const auto again = correlation_report(a, b, 10, 3);
  CHECK(again.null_lower.mean.mean_abs == r.null_lower.mean.mean_abs);
  CHECK(again.null_upper.sd.max == r.null_upper.sd.max);
  CHECK_THROWS_AS(correlation_report(make("a", {{1.0}, {1.0}}), make("b", {{1.0}, {1.0}}), 1, 1), InputError);
}

TEST_CASE("null models are calibrated on independent matrices") {
  Rng rng(11);
  const auto a = make("a", random_stochastic(737, 10, rng));
  const auto b = make("b", random_stochastic(737, 12, rng));
  const auto r = correlation_report(a, b, 200, 4);

  // Monte-Carlo scale of |pearson| between independent uniform columns
  Rng mc(99);
  double oracle = 0.0;
  const int draws = 2000;
  for (int i = 0; i < draws; ++i) {
    std::vector<double> x(737), y(737);
    for (auto& v : x) v = mc.uniform();
    for (auto& v : y) v = mc.uniform();
    oracle += std::abs(pearson(x, y));
  }
  oracle /= draws;
  CHECK(oracle == doctest::Approx(std::sqrt(2.0 / M_PI / 737.0)).epsilon(0.05));
  CHECK(std::abs(r.null_lower.mean.mean_abs - oracle) <= 3 * r.null_lower.sd.mean_abs);
  CHECK(r.null_lower.draws == 200);
  CHECK(r.null_upper.draws == 400);
  CHECK(r.null_upper.mean.max - r.null_upper.sd.max > r.null_lower.mean.max + r.null_lower.sd.max);
  CHECK(r.null_upper.mean.mean_abs - r.null_upper.sd.mean_abs > r.null_lower.mean.mean_abs + r.null_lower.sd.mean_abs);
}

TEST_CASE("independent correlations shrink with corpus size") {
  Rng rng(21);
  std::vector<double> observed;
  for (const std::size_t n : {100, 500, 2000}) {
    const auto a = make("a", random_stochastic(n, 6, rng));
    const auto b = make("b", random_stochastic(n, 6, rng));
    observed.push_back(correlation_report(a, b, 1, 1).observed.mean_abs);
  }
  CHECK(observed[0] > observed[1]);
  CHECK(observed[1] > observed[2]);
}

TEST_CASE("self comparison has relative modularity one") {
  Rng rng(8);
  const auto a = make("a", random_stochastic(60, 4, rng));
  const auto c = modularity_curve(a, a);
  REQUIRE(c.thresholds.size() == 20);
  std::size_t defined = 0;
  for (std::size_t i = 0; i < c.relative.size(); ++i) {
    if (i > 0) CHECK(c.thresholds[i] > c.thresholds[i - 1]);
    if (!c.relative[i]) continue;
    ++defined;
    CHECK(std::abs(*c.relative[i] - 1.0) <= 1e-9);
  }
  CHECK(defined > 0);
}

TEST_CASE("two planted blocks match direct summation") {
  Rng rng(13);
  std::vector<std::vector<double>> rows_b, rows_a;
  for (int i = 0; i < 30; ++i) {
    const double lean = 0.8 + 0.15 * rng.uniform();
    rows_b.push_back(i < 15 ? std::vector<double>{lean, 1 - lean} : std::vector<double>{1 - lean, lean});
    const double p = rng.uniform();
    rows_a.push_back({p, 0.5 * (1 - p), 0.5 * (1 - p)});
  }
  const auto a = make("a", rows_a), b = make("b", rows_b);
  const std::vector<double> thresholds = {0.05, 0.1, 0.2, 0.5, 1.0, 2.0};
  const auto c = modularity_curve(a, b, thresholds);
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double qa = modularity_oracle(b.shares, a.shares, thresholds[i]);
    const double qb = modularity_oracle(b.shares, b.shares, thresholds[i]);
    REQUIRE(c.modularity_a[i].has_value());
    CHECK(std::abs(*c.modularity_a[i] - qa) <= 1e-9);
    CHECK(std::abs(*c.modularity_b[i] - qb) <= 1e-9);
    if (qb > 0) {
      REQUIRE(c.relative[i].has_value());
      CHECK(std::abs(*c.relative[i] - qa / qb) <= 1e-9);
    } else {
      CHECK_FALSE(c.relative[i].has_value());
    }
  }
  // 2.0 exceeds every distance: complete graph, b's own modularity is not positive
  CHECK(c.edges.back() == 30 * 29 / 2);
  CHECK_FALSE(c.relative.back().has_value());
}

TEST_CASE("modularity curve arguments") {
  const auto a = make("a", {{1, 0}, {0, 1}, {0.5, 0.5}});
  CHECK_THROWS_AS(modularity_curve(a, a, {0.2, 0.1}), InputError);
  CHECK_THROWS_AS(modularity_curve(a, a, {-1.0}), InputError);
  CHECK_THROWS_AS(modularity_curve(a, a, {0.01}), InputError);
  const auto j = to_json(modularity_curve(a, a, {0.01, 0.8}));
  CHECK(j["points"][0]["relative_modularity"].is_null());
}
