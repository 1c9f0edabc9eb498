#pragma once

// Data-parallel inner loops. Every kernel has an OpenMP version (namespace
// kernels) and a plain serial reference (namespace kernels::serial) with the
// same signature; both produce bit-identical results because the parallel
// versions partition the output, never a floating-point reduction.

#include <cstdint>
#include <vector>

#include "semcorpus/common.hpp"

namespace semcorpus::kernels {

/// Co-occurrence count of an unordered item pair (first < second).
struct PairCount {
  std::uint32_t first;
  std::uint32_t second;
  std::uint32_t count;
  bool operator==(const PairCount&) const = default;
};

/// Symmetric adjacency as sorted neighbor lists, no self loops.
using Adjacency = std::vector<std::vector<std::uint32_t>>;

/// For every pair of items sharing at least one set, the number of sets that
/// contain both. Items inside a set must be distinct. Output sorted by (first, second).
std::vector<PairCount> pair_counts(const std::vector<std::vector<std::uint32_t>>& sets, std::size_t n_items);

/// a^T b: entry (i, j) = sum over rows r of a(r, i) * b(r, j).
Matrix cross_products(const Matrix& a, const Matrix& b);

/// Pearson correlation of column i of a against column j of b. Entries with a
/// zero-variance column are NaN.
Matrix column_correlation(const Matrix& a, const Matrix& b);

/// Rows r, s linked iff their Euclidean distance is strictly below theta.
Adjacency threshold_network(const Matrix& points, double theta);

/// Upper-triangle Euclidean distances, row-major order (0,1), (0,2), ...
std::vector<double> pairwise_distances(const Matrix& points);

/// Modularity with fractional memberships, product belonging coefficient:
///   Q = 1/(2m) sum_c [ sum_{ij} A_ij a_ic a_jc - (sum_i k_i a_ic)^2 / (2m) ]
/// Returns NaN for a graph without edges.
double soft_modularity(const Adjacency& adj, const Matrix& membership);

namespace serial {
std::vector<PairCount> pair_counts(const std::vector<std::vector<std::uint32_t>>& sets, std::size_t n_items);
Matrix cross_products(const Matrix& a, const Matrix& b);
Matrix column_correlation(const Matrix& a, const Matrix& b);
Adjacency threshold_network(const Matrix& points, double theta);
std::vector<double> pairwise_distances(const Matrix& points);
double soft_modularity(const Adjacency& adj, const Matrix& membership);
}  // namespace serial

}  // namespace semcorpus::kernels
