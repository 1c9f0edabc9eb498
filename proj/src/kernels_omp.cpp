#include <algorithm>

#include "kernels_detail.hpp"

namespace semcorpus::kernels {

std::vector<PairCount> pair_counts(const std::vector<std::vector<std::uint32_t>>& sets, std::size_t n_items) {
  // inverted index: item -> sets containing it
  std::vector<std::vector<std::uint32_t>> postings(n_items);
  for (std::size_t s = 0; s < sets.size(); ++s)
    for (const auto item : sets[s]) postings[item].push_back(static_cast<std::uint32_t>(s));

  std::vector<std::vector<PairCount>> per_item(n_items);
  const auto n = static_cast<std::int64_t>(n_items);
#pragma omp parallel
  {
    std::vector<std::uint32_t> counter(n_items, 0);
    std::vector<std::uint32_t> touched;
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t ui = 0; ui < n; ++ui) {
      const auto u = static_cast<std::uint32_t>(ui);
      for (const auto s : postings[u])
        for (const auto v : sets[s])
          if (v > u && counter[v]++ == 0) touched.push_back(v);
      std::sort(touched.begin(), touched.end());
      auto& out = per_item[u];
      out.reserve(touched.size());
      for (const auto v : touched) {
        out.push_back({u, v, counter[v]});
        counter[v] = 0;
      }
      touched.clear();
    }
  }
  std::vector<PairCount> out;
  for (auto& v : per_item) out.insert(out.end(), v.begin(), v.end());
  return out;
}

Matrix cross_products(const Matrix& a, const Matrix& b) {
  Matrix out(a.cols(), b.cols());
  const auto n = static_cast<std::int64_t>(a.cols() * b.cols());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k) / b.cols();
    const auto j = static_cast<std::size_t>(k) % b.cols();
    out(i, j) = detail::cross_entry(a, b, i, j);
  }
  return out;
}

Matrix column_correlation(const Matrix& a, const Matrix& b) {
  detail::ColumnMoments ma{std::vector<double>(a.cols()), std::vector<double>(a.cols())};
  detail::ColumnMoments mb{std::vector<double>(b.cols()), std::vector<double>(b.cols())};
  for (std::size_t c = 0; c < a.cols(); ++c) detail::column_moment(a, c, ma);
  for (std::size_t c = 0; c < b.cols(); ++c) detail::column_moment(b, c, mb);
  Matrix out(a.cols(), b.cols());
  const auto n = static_cast<std::int64_t>(a.cols() * b.cols());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k) / b.cols();
    const auto j = static_cast<std::size_t>(k) % b.cols();
    out(i, j) = detail::correlation_entry(a, b, ma, mb, i, j);
  }
  return out;
}

Adjacency threshold_network(const Matrix& points, double theta) {
  const double t2 = theta * theta;
  Adjacency adj(points.rows());
  const auto n = static_cast<std::int64_t>(points.rows());
#pragma omp parallel for schedule(dynamic, 32)
  for (std::int64_t r = 0; r < n; ++r)
    for (std::int64_t s = 0; s < n; ++s)
      if (r != s && detail::squared_distance(points, static_cast<std::size_t>(r), static_cast<std::size_t>(s)) < t2)
        adj[static_cast<std::size_t>(r)].push_back(static_cast<std::uint32_t>(s));
  return adj;
}

std::vector<double> pairwise_distances(const Matrix& points) {
  const std::size_t n = points.rows();
  std::vector<double> out(n * (n - (n > 0)) / 2);
  const auto ni = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 32)
  for (std::int64_t r = 0; r < ni; ++r) {
    const auto ru = static_cast<std::size_t>(r);
    // offset of row r in the packed upper triangle
    std::size_t k = ru * n - ru * (ru + 1) / 2;
    for (std::size_t s = ru + 1; s < n; ++s) out[k++] = std::sqrt(detail::squared_distance(points, ru, s));
  }
  return out;
}

double soft_modularity(const Adjacency& adj, const Matrix& membership) {
  const double two_m = detail::edge_endpoints(adj);
  if (two_m == 0.0) return std::numeric_limits<double>::quiet_NaN();
  std::vector<double> terms(membership.cols());
  const auto nc = static_cast<std::int64_t>(membership.cols());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t c = 0; c < nc; ++c)
    terms[static_cast<std::size_t>(c)] = detail::community_term(adj, membership, static_cast<std::size_t>(c), two_m);
  double q = 0.0;
  for (const double t : terms) q += t;
  return q / two_m;
}

}  // namespace semcorpus::kernels
