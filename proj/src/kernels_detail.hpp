#pragma once

// Per-element helpers shared by the serial and OpenMP kernels so both paths
// evaluate identical floating-point expressions.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "semcorpus/common.hpp"
#include "semcorpus/kernels.hpp"

namespace semcorpus::kernels::detail {

inline double cross_entry(const Matrix& a, const Matrix& b, std::size_t i, std::size_t j) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) s += a(r, i) * b(r, j);
  return s;
}

struct ColumnMoments {
  std::vector<double> mean;
  std::vector<double> norm;  // sqrt of centered sum of squares
};

inline void column_moment(const Matrix& m, std::size_t c, ColumnMoments& out) {
  const double n = static_cast<double>(m.rows());
  double s = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) s += m(r, c);
  const double mu = s / n;
  double ss = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double d = m(r, c) - mu;
    ss += d * d;
  }
  out.mean[c] = mu;
  out.norm[c] = std::sqrt(ss);
}

inline double correlation_entry(const Matrix& a, const Matrix& b, const ColumnMoments& ma, const ColumnMoments& mb,
                                std::size_t i, std::size_t j) {
  // relative tolerance on the centered norm: exact zero is rare in floating point
  const auto degenerate = [](const ColumnMoments& m, std::size_t c) {
    return !(m.norm[c] > 1e-12 * (std::abs(m.mean[c]) + 1.0));
  };
  if (degenerate(ma, i) || degenerate(mb, j)) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) s += (a(r, i) - ma.mean[i]) * (b(r, j) - mb.mean[j]);
  double rho = s / (ma.norm[i] * mb.norm[j]);
  if (rho > 1.0) rho = 1.0;
  if (rho < -1.0) rho = -1.0;
  return rho;
}

inline double squared_distance(const Matrix& p, std::size_t r, std::size_t s) {
  double d = 0.0;
  for (std::size_t c = 0; c < p.cols(); ++c) {
    const double x = p(r, c) - p(s, c);
    d += x * x;
  }
  return d;
}

/// Per-community term of the soft modularity numerator, before division by 2m.
inline double community_term(const Adjacency& adj, const Matrix& membership, std::size_t c, double two_m) {
  double inner = 0.0;
  double strength = 0.0;
  for (std::size_t i = 0; i < adj.size(); ++i) {
    const double ai = membership(i, c);
    strength += static_cast<double>(adj[i].size()) * ai;
    if (ai == 0.0) continue;
    double acc = 0.0;
    for (const auto j : adj[i]) acc += membership(j, c);
    inner += ai * acc;
  }
  return inner - strength * strength / two_m;
}

inline double edge_endpoints(const Adjacency& adj) {
  std::size_t deg = 0;
  for (const auto& n : adj) deg += n.size();
  return static_cast<double>(deg);
}

}  // namespace semcorpus::kernels::detail
