#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "rsa/linalg.hpp"
#include "rsa/mallows.hpp"
#include "rsa/subsets.hpp"

namespace rsa {

// One first-layer model: mask, zero-padded coefficients, in-sample fit and
// projection dimension.
struct CandidateFit {
  SelectionMask mask;
  Eigen::VectorXd beta_padded;  // length K, zeros off-mask
  Eigen::VectorXd fitted;       // length N
  double k = 0.0;               // projection dimension
};

// One group of candidates with its convex weights.
struct GroupFit {
  std::vector<CandidateFit> candidates;
  SimplexWeights weights;
  Eigen::VectorXd fitted;
  double effective_dim = 0.0;
};

enum class FirstRound { mallows, uniform };
enum class Sigma2Mode { estimate, supplied };

struct RsaConfig {
  Eigen::VectorXd probs;  // length K, or length 1 broadcast to all covariates
  int M = 30;
  int L = 30;
  FirstRound first_round = FirstRound::mallows;
  Sigma2Mode sigma2_mode = Sigma2Mode::estimate;
  double sigma2_value = 0.0;  // used when sigma2_mode == supplied
  std::uint64_t seed = 0;
  double rtol = kDefaultRankTol;
  double qp_tol = kDefaultQpTol;
};

// Fitted two-layer ensemble.
struct RsaModel {
  std::vector<GroupFit> groups;
  SimplexWeights outer_weights;
  Eigen::VectorXd fitted;    // length N
  Eigen::VectorXd beta_agg;  // length K
  double sigma2 = 0.0;
  RsaConfig config;
};

// Least-squares fit for every mask; an empty mask predicts the zero vector.
std::vector<CandidateFit> fit_candidates(const Dataset& dataset,
                                         const std::vector<SelectionMask>& masks,
                                         double rtol = kDefaultRankTol);

// Weights one group of candidates: uniform 1/M or the Mallows QP solution.
GroupFit fit_group(const Dataset& dataset, std::vector<CandidateFit> candidates,
                   double sigma2, FirstRound scheme,
                   double qp_tol = kDefaultQpTol);

// Full two-layer fit: draws the ensemble, fits and weights every group,
// then solves the second-round Mallows QP across groups.
RsaModel fit_rsa(const Dataset& dataset, const RsaConfig& config, int threads = 1);

// Xnew * beta_agg; exact because every layer is linear in y and x.
Eigen::VectorXd predict(const RsaModel& model, const Eigen::MatrixXd& Xnew);

// Expands a scalar or length-K probability spec to length K.
Eigen::VectorXd broadcast_probs(const Eigen::VectorXd& probs, Eigen::Index K);

// Design columns selected by the mask.
Eigen::MatrixXd masked_columns(const Eigen::MatrixXd& X, const SelectionMask& mask);

}  // namespace rsa
