#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rsa/baselines.hpp"
#include "rsa/rsa.hpp"

namespace rsa {

enum class Decay { poly, exponential };
enum class Placement { ordered, random };
enum class CovKind { ar1, random, orthogonal };

struct DgpConfig {
  int N = 100;
  int K = 10;
  int K_star = 10;
  Decay decay = Decay::poly;
  double decay_alpha = 0.51;  // 0.51 for poly, 0.25 for exponential
  Placement placement = Placement::ordered;
  CovKind cov = CovKind::ar1;
  double rho = 0.0;
  double snr = 0.7;                  // in (0,1), ignored when sigma2 explicit
  bool explicit_sigma2 = false;
  double sigma2 = 0.0;
  std::uint64_t seed = 0;
};

// K-vector with K_star nonzero decay-law values; random placement permutes
// the positions, ordered keeps the natural order.
Eigen::VectorXd gen_coefficients(const DgpConfig& cfg, RngStream& rng);

// ar1: Toeplitz rho^|i-j|. random: Q diag(lambda) Q' with a seeded random
// orthogonal Q and lambda_i uniform on [0.1, 2] rescaled to unit average.
// orthogonal: identity (the design itself is built by make_orthogonal_design).
Eigen::MatrixXd gen_covariance(const DgpConfig& cfg, RngStream& rng);

// N rows i.i.d. N(0, Sigma).
Eigen::MatrixXd sample_design(const Eigen::MatrixXd& Sigma, int N, RngStream& rng);

// Design with X'X = N I_K exactly (up to 1e-8), K <= N.
Eigen::MatrixXd make_orthogonal_design(int N, int K, RngStream& rng);

// sigma^2 solving Var(x'beta) / (Var(x'beta) + sigma^2) = snr.
double calibrate_sigma(const Eigen::VectorXd& beta, const Eigen::MatrixXd& Sigma,
                       double snr);

// A method fits a linear predictor on a training sample; every in-scope
// estimator reduces to a length-K coefficient vector.
struct Method {
  std::string name;
  std::function<Eigen::VectorXd(const Dataset&, std::uint64_t fit_seed)> fit_beta;
};

Method make_rsa_method(std::string name, RsaConfig config);
Method make_rsr_method(std::string name, int P, int B);
Method make_mma_method(std::string name);
Method make_rpr_method(std::string name, int P, int B);
// Equal-weight average over the same mask ensemble an RSA fit would draw.
Method make_naive_method(std::string name, Eigen::VectorXd probs, int M, int L);
Method make_ols_method(std::string name);

struct ExperimentResult {
  std::string method;
  bool ok = true;
  std::string error;  // first failure message when ok is false
  double msfe_mean = 0.0, msfe_sd = 0.0;
  double mse_mean = 0.0, mse_sd = 0.0;
  int reps = 0;
  std::vector<double> msfe;  // per replication; NaN for failed replications
  std::vector<double> mse;
};

// Monte Carlo protocol: beta and Sigma are drawn once from the DGP seed;
// each replication draws a fresh train design (N rows), test design
// (ceil(N/2) rows) and noise. MSFE and MSE are measured against the
// noise-free signal x'beta. A failing method is recorded and skipped;
// the others continue.
std::vector<ExperimentResult> run_experiment(const DgpConfig& dgp,
                                             const std::vector<Method>& methods,
                                             int reps, std::uint64_t seed,
                                             int threads = 1);

struct HorizonResult {
  int horizon = 0;
  double msfe_mean = 0.0;
  double msfe_sd = 0.0;
  int n_forecasts = 0;
};

// Rolling-window protocol over a time-ordered sample: for each origin t the
// model is fitted on the trailing `window` rows and scored at row t+h
// against the realized response.
std::vector<HorizonResult> rolling_forecast(const Dataset& data, int window,
                                            const std::vector<int>& horizons,
                                            const Method& method,
                                            std::uint64_t seed, int threads = 1);

}  // namespace rsa
