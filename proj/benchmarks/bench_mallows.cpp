#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "rsa/mallows.hpp"
#include "rsa/rng.hpp"

namespace {

rsa::MallowsProblem make_problem(int N, int M, std::uint64_t seed) {
  rsa::RngStream rng(seed);
  rsa::MallowsProblem p;
  p.F.resize(N, M);
  p.y.resize(N);
  p.dims.resize(M);
  for (int i = 0; i < N; ++i) {
    p.y(i) = rng.next_gaussian();
    for (int m = 0; m < M; ++m) p.F(i, m) = rng.next_gaussian();
  }
  for (int m = 0; m < M; ++m) p.dims(m) = 5.0 * rng.next_double();
  p.sigma2 = 1.0;
  return p;
}

void SimplexQp(benchmark::State& state) {
  const rsa::MallowsProblem p =
      make_problem(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 3);
  for (auto _ : state) {
    auto w = rsa::solve_simplex_qp(p);
    benchmark::DoNotOptimize(w.w);
  }
}
BENCHMARK(SimplexQp)->Args({100, 10})->Args({300, 30})->Args({300, 100})->Args({300, 200});

}  // namespace
