#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "rsa/baselines.hpp"
#include "rsa/risk_oracle.hpp"
#include "rsa/simlab.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

rsa::Dataset noisy_dataset(int N, int K, std::uint64_t seed, double noise = 1.0) {
  rsa::RngStream rng(seed);
  MatrixXd X(N, K);
  VectorXd beta = VectorXd::Zero(K);
  beta(0) = 2.0;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < K; ++j) X(i, j) = rng.next_gaussian();
  }
  VectorXd y = X * beta;
  for (int i = 0; i < N; ++i) y(i) += noise * rng.next_gaussian();
  return rsa::Dataset{std::move(X), std::move(y)};
}

void check_fitted_consistency(const rsa::Dataset& data, const rsa::BaselineModel& m) {
  const VectorXd recomputed = data.X * m.beta_agg;
  CHECK((recomputed - m.fitted).norm() <= 1e-10 * (1.0 + m.fitted.norm()));
}

}  // namespace

TEST_CASE("RSR with P=K is plain OLS; B=1 is a single subset fit") {
  const rsa::Dataset data = noisy_dataset(20, 4, 1);
  const rsa::BaselineModel full = rsa::fit_rsr(data, 4, 3, 7);
  const VectorXd ols = rsa::least_squares_min_norm(data.X, data.y).beta;
  CHECK((full.beta_agg - ols).cwiseAbs().maxCoeff() <= 1e-10);
  check_fitted_consistency(data, full);

  const rsa::BaselineModel one = rsa::fit_rsr(data, 2, 1, 7);
  CHECK(one.masks.size() == 1);
  CHECK(one.masks[0].k == 2);
  check_fitted_consistency(data, one);

  CHECK_THROWS_AS(rsa::fit_rsr(data, 5, 3, 7), rsa::invalid_input);
}

TEST_CASE("RSR beta_agg converges to (P/K) * OLS on orthogonal designs") {
  const int N = 150, K = 6, P = 2, B = 4000;
  rsa::RngStream rng(33);
  const MatrixXd X = rsa::make_orthogonal_design(N, K, rng);
  VectorXd beta(K);
  for (int j = 0; j < K; ++j) beta(j) = 1.0 / (1.0 + j);
  VectorXd y = X * beta;
  for (int i = 0; i < N; ++i) y(i) += 0.5 * rng.next_gaussian();
  const rsa::Dataset data{X, y};

  const VectorXd ols = rsa::least_squares_min_norm(X, y).beta;
  const rsa::BaselineModel model = rsa::fit_rsr(data, P, B, 91);
  // Per-coordinate: inclusion is Bernoulli(P/K) and orthogonality makes each
  // included coefficient the OLS value, so the MC error is binomial.
  const double inc = static_cast<double>(P) / K;
  for (int j = 0; j < K; ++j) {
    const double se = std::abs(ols(j)) * std::sqrt(inc * (1 - inc) / B);
    CHECK(std::abs(model.beta_agg(j) - inc * ols(j)) <= 3.0 * se);
  }
}

TEST_CASE("nested MMA: single covariate, dominant first regressor, candidate cap") {
  // K = 1: one candidate, weight 1, equals simple regression.
  {
    const rsa::Dataset data = noisy_dataset(12, 1, 3);
    const rsa::BaselineModel m = rsa::fit_nested_mma(data);
    CHECK(m.masks.size() == 1);
    CHECK(m.weights.w(0) == doctest::Approx(1.0));
    const VectorXd ols = rsa::least_squares_min_norm(data.X, data.y).beta;
    CHECK((m.beta_agg - ols).cwiseAbs().maxCoeff() <= 1e-10);
    check_fitted_consistency(data, m);
  }

  // Only covariate 1 matters: the first nested model takes nearly all weight.
  {
    const rsa::Dataset data = noisy_dataset(400, 5, 21, 0.1);
    const rsa::BaselineModel m = rsa::fit_nested_mma(data);
    CHECK(m.weights.w(0) >= 0.9);
    check_fitted_consistency(data, m);
  }

  // Too few observations.
  {
    const rsa::Dataset tiny = noisy_dataset(3, 2, 5);
    CHECK_THROWS_AS(rsa::fit_nested_mma(tiny), rsa::degenerate_error);
  }

  // K = 500, N = 100: exactly N - 2 = 98 nested candidates.
  {
    rsa::RngStream rng(77);
    MatrixXd X(100, 500);
    VectorXd y(100);
    for (int i = 0; i < 100; ++i) {
      y(i) = rng.next_gaussian();
      for (int j = 0; j < 500; ++j) X(i, j) = rng.next_gaussian();
    }
    const rsa::BaselineModel m = rsa::fit_nested_mma(rsa::Dataset{X, y});
    CHECK(m.masks.size() == 98);
    CHECK(m.masks.back().k == 98);
  }
}

TEST_CASE("RPR with the identity override equals OLS") {
  const rsa::Dataset data = noisy_dataset(25, 4, 9);
  const auto identity = [](int) { return MatrixXd::Identity(4, 4).eval(); };
  const rsa::BaselineModel m = rsa::fit_rpr(data, 4, 3, 1, rsa::kDefaultRankTol, identity);
  const VectorXd ols = rsa::least_squares_min_norm(data.X, data.y).beta;
  CHECK((m.beta_agg - ols).cwiseAbs().maxCoeff() <= 1e-10);
  check_fitted_consistency(data, m);
}

TEST_CASE("RPR structure: B=1, P=1 is a rank-one regression") {
  const rsa::Dataset data = noisy_dataset(15, 3, 13);
  const rsa::BaselineModel m = rsa::fit_rpr(data, 1, 1, 5);
  // beta_agg = R * beta_R lies on the single projection direction.
  rsa::RngStream rng(5, rsa::stream_tag::kRprProjection, 0);
  const MatrixXd R = rsa::gaussian_projection(3, 1, rng);
  const double cross = m.beta_agg(0) * R(1, 0) - m.beta_agg(1) * R(0, 0);
  CHECK(std::abs(cross) <= 1e-12);
  check_fitted_consistency(data, m);
}

TEST_CASE("RPR Monte Carlo risk is close to the closed-form RSR law") {
  // Orthogonal design, risk of the B-averaged RPR fit vs the closed form.
  const int N = 100, K = 8, B = 500;
  rsa::RngStream rng(55);
  const MatrixXd X = rsa::make_orthogonal_design(N, K, rng);
  VectorXd beta(K);
  for (int j = 0; j < K; ++j) beta(j) = std::pow(j + 1.0, -0.51);
  const VectorXd mu = X * beta;

  rsa::RiskSpec spec{beta, 1.0, N};
  const double P_opt = rsa::optimal_P(spec);
  const int P = static_cast<int>(std::lround(P_opt));

  const int draws = 60;
  double risk = 0.0;
  for (int d = 0; d < draws; ++d) {
    rsa::RngStream noise(600, 1, static_cast<std::uint64_t>(d));
    VectorXd y = mu;
    for (int i = 0; i < N; ++i) y(i) += noise.next_gaussian();
    const rsa::BaselineModel m =
        rsa::fit_rpr(rsa::Dataset{X, y}, P, B, 9000 + static_cast<std::uint64_t>(d));
    risk += (m.fitted - mu).squaredNorm();
  }
  risk /= draws;
  const double law = rsa::rsr_risk(spec, P_opt);
  CHECK(risk >= 0.8 * law);
  CHECK(risk <= 1.2 * law);
}

TEST_CASE("naive averaging: single full mask is OLS; two candidates average") {
  const rsa::Dataset data = noisy_dataset(18, 3, 41);

  rsa::MaskEnsemble full;
  full.groups = {{rsa::SelectionMask{std::vector<bool>{true, true, true}, 3}}};
  const rsa::BaselineModel m = rsa::fit_naive(data, full);
  const VectorXd ols = rsa::least_squares_min_norm(data.X, data.y).beta;
  CHECK((m.beta_agg - ols).cwiseAbs().maxCoeff() <= 1e-10);

  rsa::MaskEnsemble pair;
  pair.groups = {{rsa::SelectionMask{std::vector<bool>{true, false, false}, 1},
                  rsa::SelectionMask{std::vector<bool>{false, true, true}, 2}}};
  const rsa::BaselineModel avg = rsa::fit_naive(data, pair);
  const auto fits = rsa::fit_candidates(data, pair.groups[0]);
  const VectorXd expect = 0.5 * (fits[0].fitted + fits[1].fitted);
  CHECK((avg.fitted - expect).cwiseAbs().maxCoeff() <= 1e-12);

  CHECK_THROWS_AS(rsa::fit_naive(data, rsa::MaskEnsemble{}), rsa::invalid_input);
}

TEST_CASE("naive equals uniform-first-round RSA with one group on the same masks") {
  const rsa::Dataset data = noisy_dataset(30, 6, 19);
  const VectorXd probs = VectorXd::Constant(6, 0.4);
  const std::uint64_t seed = 1234;
  const rsa::MaskEnsemble ensemble = rsa::draw_ensemble(probs, 8, 1, seed);

  const rsa::BaselineModel naive = rsa::fit_naive(data, ensemble);

  rsa::RsaConfig cfg;
  cfg.probs = probs;
  cfg.M = 8;
  cfg.L = 1;
  cfg.first_round = rsa::FirstRound::uniform;
  cfg.seed = seed;
  const rsa::RsaModel model = rsa::fit_rsa(data, cfg);

  CHECK((naive.beta_agg - model.beta_agg).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((naive.fitted - model.fitted).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("baselines are deterministic given their seeds") {
  const rsa::Dataset data = noisy_dataset(20, 5, 3);
  const rsa::BaselineModel a = rsa::fit_rsr(data, 2, 50, 7);
  const rsa::BaselineModel b = rsa::fit_rsr(data, 2, 50, 7);
  CHECK((a.beta_agg - b.beta_agg).cwiseAbs().maxCoeff() == 0.0);
  const rsa::BaselineModel c = rsa::fit_rpr(data, 3, 20, 7);
  const rsa::BaselineModel d = rsa::fit_rpr(data, 3, 20, 7);
  CHECK((c.beta_agg - d.beta_agg).cwiseAbs().maxCoeff() == 0.0);
}
