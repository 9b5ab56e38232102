#include <Eigen/Dense>
#include <set>

#include "doctest.h"
#include "rsa/simlab.hpp"
#include "rsa/tuning.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("kfold_split: partition structure and remainder spread") {
  const auto even = rsa::kfold_split(10, 5, 3);
  REQUIRE(even.size() == 5);
  std::set<int> seen;
  for (const auto& split : even) {
    CHECK(split.validation.size() == 2);
    CHECK(split.train.size() == 8);
    for (int i : split.validation) {
      CHECK(seen.insert(i).second);  // disjoint
    }
  }
  CHECK(seen.size() == 10);  // union covers everything

  const auto uneven = rsa::kfold_split(7, 5, 3);
  std::multiset<std::size_t> sizes;
  for (const auto& split : uneven) sizes.insert(split.validation.size());
  CHECK(sizes == std::multiset<std::size_t>({2, 2, 1, 1, 1}));

  const auto a = rsa::kfold_split(12, 4, 9);
  const auto b = rsa::kfold_split(12, 4, 9);
  for (int f = 0; f < 4; ++f) {
    CHECK(a[static_cast<std::size_t>(f)].validation ==
          b[static_cast<std::size_t>(f)].validation);
  }

  CHECK_THROWS_AS(rsa::kfold_split(4, 5, 1), rsa::invalid_input);
  CHECK_THROWS_AS(rsa::kfold_split(4, 1, 1), rsa::invalid_input);
}

namespace {

rsa::Dataset noise_free_dataset(int N, int K, std::uint64_t seed) {
  rsa::RngStream rng(seed);
  MatrixXd X(N, K);
  VectorXd beta(K);
  for (int j = 0; j < K; ++j) beta(j) = 1.0 + j;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < K; ++j) X(i, j) = rng.next_gaussian();
  }
  return rsa::Dataset{X, X * beta};
}

}  // namespace

TEST_CASE("cv_grid_search: single cell and the OLS-equivalent winner") {
  const rsa::Dataset data = noise_free_dataset(60, 5, 17);

  rsa::CvGrid single;
  single.p_values = {0.5};
  single.M_values = {3};
  single.L_values = {2};
  single.folds = 5;
  single.seed = 4;
  const rsa::CvResult one = rsa::cv_grid_search(data, single);
  CHECK(one.table.size() == 1);
  CHECK(one.best.p == 0.5);
  CHECK(one.best.M == 3);
  CHECK(one.best.L == 2);

  rsa::CvGrid grid;
  grid.p_values = {0.2, 1.0};
  grid.M_values = {1, 2};
  grid.L_values = {1};
  grid.folds = 5;
  grid.seed = 4;
  const rsa::CvResult res = rsa::cv_grid_search(data, grid);
  // The noise-free full-rank dataset makes the OLS cell exact.
  CHECK(res.best.score <= 1e-16);
  CHECK(res.best.p == 1.0);

  // Exhaustive table: |p| * |M| * |L| rows.
  CHECK(res.table.size() == 4);
}

TEST_CASE("cv_grid_search: table is exhaustive and fold-order invariant") {
  const rsa::Dataset data = noise_free_dataset(30, 3, 5);
  rsa::CvGrid grid;
  grid.p_values = {0.3, 0.7, 1.0};
  grid.M_values = {1, 2};
  grid.L_values = {1, 2};
  grid.folds = 3;
  grid.seed = 11;
  const rsa::CvResult res = rsa::cv_grid_search(data, grid);
  CHECK(res.table.size() == 12);
  std::set<std::tuple<double, int, int>> cells;
  for (const auto& cell : res.table) {
    cells.insert({cell.p, cell.M, cell.L});
  }
  CHECK(cells.size() == 12);

  // Same result when computed on more threads.
  const rsa::CvResult res2 = rsa::cv_grid_search(data, grid, 2);
  CHECK(res2.best.p == res.best.p);
  CHECK(res2.best.M == res.best.M);
  CHECK(res2.best.L == res.best.L);
  for (std::size_t i = 0; i < res.table.size(); ++i) {
    CHECK(res.table[i].score == res2.table[i].score);
  }
}

TEST_CASE("cv_grid_search: deterministic tie-breaking by p, then M, then L") {
  // y identically zero makes every coefficient vector exactly zero, so every
  // cell scores exactly 0.0 and only the tie order decides.
  rsa::RngStream rng(23);
  MatrixXd X(20, 3);
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 3; ++j) X(i, j) = rng.next_gaussian();
  }
  const rsa::Dataset data{X, VectorXd::Zero(20)};
  rsa::CvGrid grid;
  grid.p_values = {1.0, 0.5};
  grid.M_values = {2, 1};
  grid.L_values = {2, 1};
  grid.folds = 4;
  grid.seed = 2;
  const rsa::CvResult res = rsa::cv_grid_search(data, grid);
  CHECK(res.best.score == 0.0);
  CHECK(res.best.p == 0.5);
  CHECK(res.best.M == 1);
  CHECK(res.best.L == 1);
}

TEST_CASE("paper preset grids have the documented axes") {
  const rsa::CvGrid pre = rsa::paper_precrisis_grid();
  REQUIRE(pre.p_values.size() == 15);
  CHECK(pre.p_values.front() == doctest::Approx(0.01));
  CHECK(pre.p_values.back() == doctest::Approx(0.29));
  CHECK(pre.p_values[1] - pre.p_values[0] == doctest::Approx(0.02));
  REQUIRE(pre.M_values.size() == 15);
  CHECK(pre.M_values.front() == 1);
  CHECK(pre.M_values.back() == 29);
  CHECK(pre.L_values == std::vector<int>{30});
  CHECK(pre.folds == 5);

  const rsa::CvGrid post = rsa::paper_postcrisis_grid();
  REQUIRE(post.p_values.size() == 11);
  CHECK(post.p_values.front() == doctest::Approx(0.10));
  CHECK(post.p_values.back() == doctest::Approx(0.30));
  CHECK(post.M_values == pre.M_values);
}

TEST_CASE("cv_grid_search rejects malformed grids") {
  const rsa::Dataset data = noise_free_dataset(20, 3, 2);
  rsa::CvGrid grid;
  grid.M_values = {1};
  grid.L_values = {1};
  CHECK_THROWS_AS(rsa::cv_grid_search(data, grid), rsa::invalid_input);  // empty p
  grid.p_values = {1.5};
  CHECK_THROWS_AS(rsa::cv_grid_search(data, grid), rsa::invalid_input);
  grid.p_values = {0.5};
  grid.folds = 25;
  CHECK_THROWS_AS(rsa::cv_grid_search(data, grid), rsa::invalid_input);
}
