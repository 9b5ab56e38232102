#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "rsa/rsa.hpp"
#include "rsa/simlab.hpp"
#include "support/oracles.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

rsa::Dataset random_dataset(int N, int K, std::uint64_t seed, double noise = 1.0) {
  rsa::RngStream rng(seed);
  MatrixXd X(N, K);
  VectorXd beta(K);
  for (int j = 0; j < K; ++j) beta(j) = rng.next_gaussian();
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < K; ++j) X(i, j) = rng.next_gaussian();
  }
  VectorXd y = X * beta;
  for (int i = 0; i < N; ++i) y(i) += noise * rng.next_gaussian();
  return rsa::Dataset{std::move(X), std::move(y)};
}

bool models_identical(const rsa::RsaModel& a, const rsa::RsaModel& b) {
  if ((a.beta_agg - b.beta_agg).cwiseAbs().maxCoeff() != 0.0) return false;
  if ((a.fitted - b.fitted).cwiseAbs().maxCoeff() != 0.0) return false;
  if ((a.outer_weights.w - b.outer_weights.w).cwiseAbs().maxCoeff() != 0.0) return false;
  if (a.sigma2 != b.sigma2) return false;
  for (std::size_t l = 0; l < a.groups.size(); ++l) {
    if ((a.groups[l].weights.w - b.groups[l].weights.w).cwiseAbs().maxCoeff() != 0.0) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("fit_candidates: full, empty and partial masks") {
  MatrixXd X = MatrixXd::Zero(3, 3);
  X(0, 0) = X(1, 1) = X(2, 2) = 1.0;  // orthogonal square design
  VectorXd y(3);
  y << 2, -1, 4;
  const rsa::Dataset data{X, y};

  rsa::SelectionMask full{std::vector<bool>{true, true, true}, 3};
  rsa::SelectionMask empty{std::vector<bool>{false, false, false}, 0};
  rsa::SelectionMask partial{std::vector<bool>{true, true, false}, 2};
  const auto fits = rsa::fit_candidates(data, {full, empty, partial});

  CHECK((fits[0].fitted - y).norm() == doctest::Approx(0.0));
  CHECK(fits[0].k == 3.0);

  CHECK(fits[1].fitted.norm() == 0.0);
  CHECK(fits[1].k == 0.0);
  CHECK(fits[1].beta_padded.norm() == 0.0);

  // Projection onto the two selected orthogonal columns.
  VectorXd expect(3);
  expect << 2, -1, 0;
  CHECK((fits[2].fitted - expect).norm() == doctest::Approx(0.0));
  CHECK((fits[2].fitted -
         oracles::gram_projection(X.leftCols(2), y, 1e-10))
            .norm() == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(fits[2].beta_padded(2) == 0.0);

  CHECK_THROWS_AS(rsa::fit_candidates(data, {}), rsa::invalid_input);
}

TEST_CASE("fit_group: uniform weights and the M=1 case") {
  const rsa::Dataset data = random_dataset(12, 4, 31);
  rsa::RngStream rng(5);
  std::vector<rsa::SelectionMask> masks;
  for (int m = 0; m < 4; ++m) {
    masks.push_back(rsa::bernoulli_mask(VectorXd::Constant(4, 0.5), rng));
  }
  auto cands = rsa::fit_candidates(data, masks);
  const rsa::GroupFit uni =
      rsa::fit_group(data, cands, 1.0, rsa::FirstRound::uniform);
  for (int m = 0; m < 4; ++m) CHECK(uni.weights.w(m) == doctest::Approx(0.25));

  // Uniform fit equals the arithmetic mean of candidate fits exactly.
  VectorXd mean = VectorXd::Zero(12);
  for (const auto& c : uni.candidates) mean += c.fitted;
  mean /= 4.0;
  CHECK((uni.fitted - mean).cwiseAbs().maxCoeff() <= 1e-15);

  const auto single = rsa::fit_candidates(data, {masks[0]});
  CHECK(rsa::fit_group(data, single, 1.0, rsa::FirstRound::mallows).weights.w(0) ==
        doctest::Approx(1.0));
  CHECK(rsa::fit_group(data, single, 1.0, rsa::FirstRound::uniform).weights.w(0) ==
        doctest::Approx(1.0));
}

TEST_CASE("fit_group: mallows puts full weight on an exact fit with smaller k") {
  // Both candidates fit y exactly, but candidate 0 does it with one column;
  // the dimension penalty forces all weight onto it.
  MatrixXd X(6, 2);
  rsa::RngStream rng(9);
  for (int i = 0; i < 6; ++i) {
    X(i, 0) = rng.next_gaussian();
    X(i, 1) = rng.next_gaussian();
  }
  const VectorXd y = 2.0 * X.col(0);
  const rsa::Dataset data{X, y};
  rsa::SelectionMask first{std::vector<bool>{true, false}, 1};
  rsa::SelectionMask both{std::vector<bool>{true, true}, 2};
  const rsa::GroupFit g = rsa::fit_group(
      data, rsa::fit_candidates(data, {first, both}), 0.5, rsa::FirstRound::mallows);
  CHECK(g.weights.w(0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(g.effective_dim == doctest::Approx(1.0).epsilon(1e-8));

  // Grid oracle confirms the vertex value is the lattice optimum.
  rsa::MallowsProblem p;
  p.F.resize(6, 2);
  p.F.col(0) = g.candidates[0].fitted;
  p.F.col(1) = g.candidates[1].fitted;
  p.dims = VectorXd(2);
  p.dims << g.candidates[0].k, g.candidates[1].k;
  p.sigma2 = 0.5;
  p.y = y;
  const double lattice = oracles::lattice_min_criterion(p, 1000);
  CHECK(rsa::mallows_criterion(p, g.weights) <= lattice + 1e-6);
}

TEST_CASE("fit_rsa with p=1, M=L=1 reproduces OLS") {
  const rsa::Dataset data = random_dataset(20, 5, 77);
  rsa::RsaConfig cfg;
  cfg.probs = VectorXd::Constant(1, 1.0);
  cfg.M = 1;
  cfg.L = 1;
  cfg.seed = 3;
  const rsa::RsaModel model = rsa::fit_rsa(data, cfg);

  const rsa::LsqSolution ols = rsa::least_squares_min_norm(data.X, data.y);
  CHECK((model.beta_agg - ols.beta).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((model.fitted - rsa::fitted_values(data.X, ols)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(model.outer_weights.w(0) == doctest::Approx(1.0));
}

TEST_CASE("fit_rsa: L=1 gives a unit outer weight; seeded runs repeat exactly") {
  const rsa::Dataset data = random_dataset(25, 8, 11);
  rsa::RsaConfig cfg;
  cfg.probs = VectorXd::Constant(1, 0.4);
  cfg.M = 6;
  cfg.L = 1;
  cfg.seed = 99;
  const rsa::RsaModel one = rsa::fit_rsa(data, cfg);
  CHECK(one.outer_weights.w.size() == 1);
  CHECK(one.outer_weights.w(0) == doctest::Approx(1.0));

  cfg.L = 4;
  const rsa::RsaModel a = rsa::fit_rsa(data, cfg);
  const rsa::RsaModel b = rsa::fit_rsa(data, cfg);
  CHECK(models_identical(a, b));

  // Thread count does not change the fit.
  const rsa::RsaModel c = rsa::fit_rsa(data, cfg, 2);
  CHECK(models_identical(a, c));
}

TEST_CASE("fit_rsa model invariants") {
  const rsa::Dataset data = random_dataset(30, 10, 123);
  rsa::RsaConfig cfg;
  cfg.probs = VectorXd::Constant(1, 0.3);
  cfg.M = 5;
  cfg.L = 4;
  cfg.seed = 17;
  const rsa::RsaModel model = rsa::fit_rsa(data, cfg);

  // Simplex validity for both rounds.
  CHECK(std::abs(model.outer_weights.w.sum() - 1.0) <= 1e-12);
  CHECK(model.outer_weights.w.minCoeff() >= 0.0);
  for (const auto& g : model.groups) {
    CHECK(std::abs(g.weights.w.sum() - 1.0) <= 1e-12);
    CHECK(g.weights.w.minCoeff() >= 0.0);
    // Group fit is the weighted candidate combination.
    VectorXd combo = VectorXd::Zero(data.rows());
    double dim = 0.0;
    for (Eigen::Index m = 0; m < g.weights.w.size(); ++m) {
      combo += g.weights.w(m) * g.candidates[static_cast<std::size_t>(m)].fitted;
      dim += g.weights.w(m) * g.candidates[static_cast<std::size_t>(m)].k;
    }
    CHECK((combo - g.fitted).norm() <= 1e-10 * (1.0 + g.fitted.norm()));
    CHECK(dim == doctest::Approx(g.effective_dim).epsilon(1e-10));
  }

  // Aggregates reassemble from the layers.
  VectorXd fit = VectorXd::Zero(data.rows());
  VectorXd beta = VectorXd::Zero(data.cols());
  for (Eigen::Index l = 0; l < model.outer_weights.w.size(); ++l) {
    const auto& g = model.groups[static_cast<std::size_t>(l)];
    fit += model.outer_weights.w(l) * g.fitted;
    for (Eigen::Index m = 0; m < g.weights.w.size(); ++m) {
      beta += model.outer_weights.w(l) * g.weights.w(m) *
              g.candidates[static_cast<std::size_t>(m)].beta_padded;
    }
  }
  CHECK((fit - model.fitted).norm() <= 1e-10 * (1.0 + model.fitted.norm()));
  CHECK((beta - model.beta_agg).norm() <= 1e-10 * (1.0 + model.beta_agg.norm()));

  // Second-round dominance: the combined criterion beats every single group.
  const double sigma2 = model.sigma2;
  double outer_dim = 0.0;
  for (Eigen::Index l = 0; l < model.outer_weights.w.size(); ++l) {
    outer_dim += model.outer_weights.w(l) *
                 model.groups[static_cast<std::size_t>(l)].effective_dim;
  }
  const double final_crit =
      (data.y - model.fitted).squaredNorm() + 2.0 * sigma2 * outer_dim;
  for (const auto& g : model.groups) {
    const double group_crit =
        (data.y - g.fitted).squaredNorm() + 2.0 * sigma2 * g.effective_dim;
    CHECK(final_crit <= group_crit + 1e-7 * (1.0 + group_crit));
    CHECK(final_crit <= 1.0001 * group_crit);
  }

  // Candidate k never exceeds the mask popcount.
  for (const auto& g : model.groups) {
    for (const auto& c : g.candidates) {
      CHECK(c.k <= c.mask.k);
      CHECK(c.k <= static_cast<double>(data.rows()));
    }
  }
}

TEST_CASE("shrinkage: mean masked-OLS coefficients equal p * OLS on orthogonal designs") {
  const int N = 120, K = 8, draws = 2000;
  const double p = 0.35;
  rsa::RngStream design_rng(88);
  const MatrixXd X = rsa::make_orthogonal_design(N, K, design_rng);
  VectorXd beta(K);
  for (int j = 0; j < K; ++j) beta(j) = std::pow(j + 1.0, -0.51);
  rsa::RngStream noise_rng(89);
  VectorXd y = X * beta;
  for (int i = 0; i < N; ++i) y(i) += noise_rng.next_gaussian();
  const rsa::Dataset data{X, y};

  const VectorXd beta_ols = rsa::least_squares_min_norm(X, y).beta;

  MatrixXd samples(draws, K);
  const VectorXd probs = VectorXd::Constant(K, p);
  for (int d = 0; d < draws; ++d) {
    rsa::RngStream rng(500, 0, static_cast<std::uint64_t>(d));
    const auto mask = rsa::bernoulli_mask(probs, rng);
    const auto fits = rsa::fit_candidates(data, {mask});
    samples.row(d) = fits[0].beta_padded.transpose();
  }
  for (int j = 0; j < K; ++j) {
    const double mean = samples.col(j).mean();
    const double sd = std::sqrt((samples.col(j).array() - mean).square().sum() /
                                (draws - 1));
    const double se = sd / std::sqrt(static_cast<double>(draws));
    CHECK(std::abs(mean - p * beta_ols(j)) <= 3.0 * se);
  }
}

TEST_CASE("predict applies the aggregated coefficients") {
  const rsa::Dataset data = random_dataset(15, 4, 5);
  rsa::RsaConfig cfg;
  cfg.probs = VectorXd::Constant(1, 0.5);
  cfg.M = 3;
  cfg.L = 2;
  cfg.seed = 1;
  const rsa::RsaModel model = rsa::fit_rsa(data, cfg);

  CHECK((rsa::predict(model, data.X) - model.fitted).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(rsa::predict(model, MatrixXd::Zero(3, 4)).norm() == 0.0);
  CHECK_THROWS_AS(rsa::predict(model, MatrixXd::Zero(3, 5)), rsa::invalid_input);

  rsa::RsaModel toy = model;
  toy.beta_agg = VectorXd(2);
  toy.beta_agg << 1, -1;
  MatrixXd row(1, 2);
  row << 2, 3;
  CHECK(rsa::predict(toy, row)(0) == doctest::Approx(-1.0));
}

TEST_CASE("fit_rsa validates its configuration") {
  const rsa::Dataset data = random_dataset(10, 3, 8);
  rsa::RsaConfig cfg;
  cfg.probs = VectorXd::Constant(1, 0.5);
  cfg.M = 0;
  CHECK_THROWS_AS(rsa::fit_rsa(data, cfg), rsa::invalid_input);
  cfg.M = 2;
  cfg.probs = VectorXd::Constant(2, 0.5);  // neither scalar nor length K
  CHECK_THROWS_AS(rsa::fit_rsa(data, cfg), rsa::invalid_input);
  cfg.probs = VectorXd::Constant(1, 0.5);
  cfg.sigma2_mode = rsa::Sigma2Mode::supplied;
  cfg.sigma2_value = 0.0;
  CHECK_THROWS_AS(rsa::fit_rsa(data, cfg), rsa::invalid_input);
}
