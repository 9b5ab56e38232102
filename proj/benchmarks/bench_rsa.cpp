#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "rsa/rsa.hpp"
#include "rsa/rng.hpp"

namespace {

rsa::Dataset make_data(int N, int K, std::uint64_t seed) {
  rsa::RngStream rng(seed);
  Eigen::MatrixXd X(N, K);
  Eigen::VectorXd beta(K);
  for (int j = 0; j < K; ++j) beta(j) = rng.next_gaussian();
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < K; ++j) X(i, j) = rng.next_gaussian();
  }
  Eigen::VectorXd y = X * beta;
  for (int i = 0; i < N; ++i) y(i) += rng.next_gaussian();
  return rsa::Dataset{std::move(X), std::move(y)};
}

void FitRsa(benchmark::State& state) {
  const rsa::Dataset data =
      make_data(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 7);
  rsa::RsaConfig cfg;
  cfg.probs = Eigen::VectorXd::Constant(1, 0.1);
  cfg.M = static_cast<int>(state.range(2));
  cfg.L = static_cast<int>(state.range(2));
  cfg.seed = 11;
  const int threads = static_cast<int>(state.range(3));
  for (auto _ : state) {
    auto model = rsa::fit_rsa(data, cfg, threads);
    benchmark::DoNotOptimize(model.beta_agg);
  }
}
BENCHMARK(FitRsa)
    ->Args({200, 100, 10, 1})
    ->Args({200, 100, 30, 1})
    ->Args({300, 200, 30, 1})
    ->Args({300, 200, 30, 2})
    ->Unit(benchmark::kMillisecond);

}  // namespace
