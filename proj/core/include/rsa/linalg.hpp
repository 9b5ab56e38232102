#pragma once

#include <Eigen/Dense>

#include "rsa/errors.hpp"

namespace rsa {

inline constexpr double kDefaultRankTol = 1e-10;

// Regression sample: N x K design plus length-N response.
struct Dataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;

  Eigen::Index rows() const { return X.rows(); }
  Eigen::Index cols() const { return X.cols(); }
};

// Validates dimensions and finiteness; throws invalid_input on violation.
Dataset make_dataset(Eigen::MatrixXd X, Eigen::VectorXd y);

// Minimum-norm least-squares solution on a column subset.
struct LsqSolution {
  Eigen::VectorXd beta;  // coefficients on the selected columns
  Eigen::Index rank = 0;
  double rss = 0.0;
};

// Minimum-norm least-squares fit via SVD. Singular values below
// rtol * s_max are treated as zero; rank is the count of retained values.
LsqSolution least_squares_min_norm(const Eigen::MatrixXd& Xsub,
                                   const Eigen::VectorXd& y,
                                   double rtol = kDefaultRankTol);

// Xsub * beta; the orthogonal projection of y onto col(Xsub) when the
// solution came from the same Xsub. A zero-column design yields zeros.
Eigen::VectorXd fitted_values(const Eigen::MatrixXd& Xsub,
                              const LsqSolution& solution);

// Numerical rank of Xsub, i.e. the trace of the projection matrix onto
// its column space.
Eigen::Index projection_dim(const Eigen::MatrixXd& Xsub,
                            double rtol = kDefaultRankTol);

}  // namespace rsa
