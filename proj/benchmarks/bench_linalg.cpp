#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "rsa/linalg.hpp"
#include "rsa/rng.hpp"

namespace {

rsa::Dataset make_data(int N, int K, std::uint64_t seed) {
  rsa::RngStream rng(seed);
  Eigen::MatrixXd X(N, K);
  Eigen::VectorXd y(N);
  for (int i = 0; i < N; ++i) {
    y(i) = rng.next_gaussian();
    for (int j = 0; j < K; ++j) X(i, j) = rng.next_gaussian();
  }
  return rsa::Dataset{std::move(X), std::move(y)};
}

void LeastSquaresWellConditioned(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const int K = static_cast<int>(state.range(1));
  const rsa::Dataset data = make_data(N, K, 1);
  for (auto _ : state) {
    auto sol = rsa::least_squares_min_norm(data.X, data.y);
    benchmark::DoNotOptimize(sol.beta);
  }
}
BENCHMARK(LeastSquaresWellConditioned)
    ->Args({200, 20})
    ->Args({200, 40})
    ->Args({300, 100})
    ->Args({300, 200});

void LeastSquaresRankDeficient(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const int K = static_cast<int>(state.range(1));
  rsa::Dataset data = make_data(N, K, 2);
  data.X.col(K - 1) = data.X.col(0);  // force the SVD path
  for (auto _ : state) {
    auto sol = rsa::least_squares_min_norm(data.X, data.y);
    benchmark::DoNotOptimize(sol.beta);
  }
}
BENCHMARK(LeastSquaresRankDeficient)->Args({200, 20})->Args({200, 40});

}  // namespace
