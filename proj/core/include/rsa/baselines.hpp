#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "rsa/rsa.hpp"

namespace rsa {

enum class BaselineKind { rsr, mma, rpr, naive };

struct BaselineModel {
  BaselineKind kind;
  Eigen::VectorXd beta_agg;  // length K; for RPR the induced R * beta_R average
  Eigen::VectorXd fitted;    // length N
  int P = 0;
  int B = 0;
  std::vector<SelectionMask> masks;   // candidate structures, when mask-based
  SimplexWeights weights;             // MMA only; uniform methods leave it empty
};

// Equal-weight average of B least-squares fits on uniformly drawn
// fixed-size-P covariate subsets.
BaselineModel fit_rsr(const Dataset& dataset, int P, int B, std::uint64_t seed,
                      double rtol = kDefaultRankTol);

// Mallows model averaging over nested prefix models; in high dimension the
// nesting stops at the first N-2 covariates.
BaselineModel fit_nested_mma(const Dataset& dataset, double rtol = kDefaultRankTol,
                             double qp_tol = kDefaultQpTol);

// Test hook: supplies the K x P projection for draw b instead of a Gaussian.
using ProjectionOverride = std::function<Eigen::MatrixXd(int b)>;

// Equal-weight average of B least-squares fits on Gaussian random
// projections X * R, R_ij ~ N(0, 1/P).
BaselineModel fit_rpr(const Dataset& dataset, int P, int B, std::uint64_t seed,
                      double rtol = kDefaultRankTol,
                      const ProjectionOverride& projection = nullptr);

// Equal-weight average over every candidate in the ensemble.
BaselineModel fit_naive(const Dataset& dataset, const MaskEnsemble& ensemble,
                        double rtol = kDefaultRankTol);

}  // namespace rsa
