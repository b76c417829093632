// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <random>

#include "geodnc/kernels.hpp"

using namespace geodnc;

namespace {

Vector random_state(int nbits) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> N;
  Vector v(Eigen::Index{1} << nbits);
  for (auto& a : v) a = cplx(N(rng), N(rng));
  return v.normalized();
}

Matrix random_matrix(int dim) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> N;
  Matrix m(dim, dim);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = cplx(N(rng), N(rng));
  return m;
}

template <bool Parallel>
void BM_apply_two_qubit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Vector v = random_state(n);
  const Matrix m = random_matrix(4);
  const int pos[2] = {1, n - 2};
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::apply_matrix_omp(v, pos, m);
    else
      kernels::apply_matrix_serial(v, pos, m);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * v.size());
}

template <bool Parallel>
void BM_gather(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Vector v = random_state(n);
  std::vector<int> keep;
  for (int q = n / 2; q < n; ++q) keep.push_back(q);
  for (auto _ : state) {
    Matrix x = Parallel ? kernels::gather_omp(v, n, keep) : kernels::gather_serial(v, n, keep);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * v.size());
}

}  // namespace

BENCHMARK(BM_apply_two_qubit<false>)->DenseRange(14, 22, 4)->Name("apply_two_qubit/serial");
BENCHMARK(BM_apply_two_qubit<true>)->DenseRange(14, 22, 4)->Name("apply_two_qubit/omp");
BENCHMARK(BM_gather<false>)->DenseRange(14, 22, 4)->Name("gather/serial");
BENCHMARK(BM_gather<true>)->DenseRange(14, 22, 4)->Name("gather/omp");

BENCHMARK_MAIN();
