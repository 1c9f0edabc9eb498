#include <map>

#include "kernels_detail.hpp"

namespace semcorpus::kernels::serial {

std::vector<PairCount> pair_counts(const std::vector<std::vector<std::uint32_t>>& sets, std::size_t) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> counts;
  for (const auto& set : sets)
    for (std::size_t x = 0; x < set.size(); ++x)
      for (std::size_t y = x + 1; y < set.size(); ++y) {
        const auto u = std::min(set[x], set[y]);
        const auto v = std::max(set[x], set[y]);
        ++counts[{u, v}];
      }
  std::vector<PairCount> out;
  out.reserve(counts.size());
  for (const auto& [key, n] : counts) out.push_back({key.first, key.second, n});
  return out;
}

Matrix cross_products(const Matrix& a, const Matrix& b) {
  Matrix out(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) = detail::cross_entry(a, b, i, j);
  return out;
}

Matrix column_correlation(const Matrix& a, const Matrix& b) {
  detail::ColumnMoments ma{std::vector<double>(a.cols()), std::vector<double>(a.cols())};
  detail::ColumnMoments mb{std::vector<double>(b.cols()), std::vector<double>(b.cols())};
  for (std::size_t c = 0; c < a.cols(); ++c) detail::column_moment(a, c, ma);
  for (std::size_t c = 0; c < b.cols(); ++c) detail::column_moment(b, c, mb);
  Matrix out(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) = detail::correlation_entry(a, b, ma, mb, i, j);
  return out;
}

Adjacency threshold_network(const Matrix& points, double theta) {
  const double t2 = theta * theta;
  Adjacency adj(points.rows());
  for (std::size_t r = 0; r < points.rows(); ++r)
    for (std::size_t s = 0; s < points.rows(); ++s)
      if (r != s && detail::squared_distance(points, r, s) < t2) adj[r].push_back(static_cast<std::uint32_t>(s));
  return adj;
}

std::vector<double> pairwise_distances(const Matrix& points) {
  std::vector<double> out;
  const std::size_t n = points.rows();
  out.reserve(n * (n - (n > 0)) / 2);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t s = r + 1; s < n; ++s) out.push_back(std::sqrt(detail::squared_distance(points, r, s)));
  return out;
}

double soft_modularity(const Adjacency& adj, const Matrix& membership) {
  const double two_m = detail::edge_endpoints(adj);
  if (two_m == 0.0) return std::numeric_limits<double>::quiet_NaN();
  double q = 0.0;
  for (std::size_t c = 0; c < membership.cols(); ++c) q += detail::community_term(adj, membership, c, two_m);
  return q / two_m;
}

}  // namespace semcorpus::kernels::serial
