#pragma once

#include <Eigen/Dense>

#include "rsa/errors.hpp"

namespace rsa {

// Inputs to the closed-form orthogonal-design risk formulas.
struct RiskSpec {
  Eigen::VectorXd beta;
  double sigma2 = 1.0;  // > 0
  int N = 1;            // >= 1
};

// K sigma^2 (N sum beta^2) / (N sum beta^2 + K sigma^2); the minimal risk
// with a single selection probability shared by all covariates.
double rsa_risk_fixed_p(const RiskSpec& spec);

// sum_k N beta_k^2 sigma^2 / (N beta_k^2 + sigma^2); the minimal risk when
// each covariate gets its own selection probability.
double rsa_risk_varying_p(const RiskSpec& spec);

// sigma^2 + sum_{j>=2} N beta_j^2 sigma^2 / (N beta_j^2 + sigma^2).
// Requires |beta_j| non-increasing.
double ma_risk(const RiskSpec& spec);

// sigma^2 P^2 / K + (1/K^2) sum_j N beta_j^2 (K - P)^2 for real P in [0, K].
double rsr_risk(const RiskSpec& spec, double P);

// Minimizer of rsr_risk: K (N sum beta^2) / (K sigma^2 + N sum beta^2).
double optimal_P(const RiskSpec& spec);

// Optimal common selection probability at finite M (M >= 2), clipped to [0,1]:
// M/(M-1) * S/(S + K sigma^2) - 1/(2(M-1)) with S = N sum beta^2.
double optimal_p_fixed(const RiskSpec& spec, int M);

// Coordinatewise optimal selection probabilities at finite M, clipped to [0,1].
Eigen::VectorXd optimal_eta(const RiskSpec& spec, int M);

}  // namespace rsa
