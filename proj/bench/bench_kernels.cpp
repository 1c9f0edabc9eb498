// Wall-clock comparison of the OpenMP kernels against their serial references.
// Usage: bench_kernels [scale]   (scale multiplies the problem sizes, default 1)

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>

#include "semcorpus/kernels.hpp"

using namespace semcorpus;

namespace {

double seconds(const std::function<void()>& f, int reps) {
  const auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / reps;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = u(rng);
  return m;
}

template <class A, class B>
void report(const char* name, A&& parallel, B&& serial, int reps) {
  const double ts = seconds(serial, reps);
  const double tp = seconds(parallel, reps);
  std::printf("%-20s serial %10.4f ms   openmp %10.4f ms   speedup %5.2f\n", name, ts * 1e3, tp * 1e3, ts / tp);
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t scale = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 1;
  std::mt19937_64 rng(1);
  std::printf("threads: %d   scale: %zu\n", omp_get_max_threads(), scale);

  std::vector<std::vector<std::uint32_t>> sets(5000 * scale);
  std::uniform_int_distribution<std::uint32_t> item(0, 1999);
  for (auto& s : sets) {
    while (s.size() < 6) {
      const auto x = item(rng);
      if (std::find(s.begin(), s.end(), x) == s.end()) s.push_back(x);
    }
  }
  report("pair_counts", [&] { kernels::pair_counts(sets, 2000); }, [&] { kernels::serial::pair_counts(sets, 2000); }, 5);

  const auto a = random_matrix(2000 * scale, 30, rng), b = random_matrix(2000 * scale, 40, rng);
  report("cross_products", [&] { kernels::cross_products(a, b); }, [&] { kernels::serial::cross_products(a, b); }, 20);
  report("column_correlation", [&] { kernels::column_correlation(a, b); },
         [&] { kernels::serial::column_correlation(a, b); }, 20);

  const auto points = random_matrix(1500 * scale, 10, rng);
  report("pairwise_distances", [&] { kernels::pairwise_distances(points); },
         [&] { kernels::serial::pairwise_distances(points); }, 3);
  report("threshold_network", [&] { kernels::threshold_network(points, 0.8); },
         [&] { kernels::serial::threshold_network(points, 0.8); }, 3);

  const auto adj = kernels::serial::threshold_network(points, 0.9);
  const auto membership = random_matrix(points.rows(), 8, rng);
  report("soft_modularity", [&] { kernels::soft_modularity(adj, membership); },
         [&] { kernels::serial::soft_modularity(adj, membership); }, 5);
  return 0;
}
