#pragma once

#include <Eigen/Dense>

#include "rsa/linalg.hpp"

namespace rsa {

inline constexpr double kDefaultQpTol = 1e-9;
inline constexpr double kSigma2Floor = 1e-12;

// One Mallows weighting problem: candidate prediction columns, their
// effective dimensions, the error variance and the response.
struct MallowsProblem {
  Eigen::MatrixXd F;      // N x M, column m = candidate prediction
  Eigen::VectorXd dims;   // length M, effective dimension k_m >= 0
  double sigma2 = 1.0;    // > 0
  Eigen::VectorXd y;      // length N
};

// Convex weights on the probability simplex: w in [0,1]^M, sum w = 1.
struct SimplexWeights {
  Eigen::VectorXd w;
};

// Residual variance from the largest feasible nested model: fits the first
// min(K, floor(N/2)) covariates and returns rss / (N - rank), floored at
// kSigma2Floor. Throws degenerate_error when N - rank <= 0.
double estimate_sigma2(const Dataset& dataset, double rtol = kDefaultRankTol);

// ||y - F w||^2 + 2 sigma2 * (dims . w)
double mallows_criterion(const MallowsProblem& problem, const SimplexWeights& w);

// Exact minimizer of the Mallows criterion over the simplex.
//   (a) criterion(w*) <= criterion at every vertex,
//   (b) the directional derivative toward any vertex is >= -tol,
//   (c) on a flat optimal face, the minimum-Euclidean-norm point is returned.
SimplexWeights solve_simplex_qp(const MallowsProblem& problem,
                                double tol = kDefaultQpTol);

}  // namespace rsa
