#include "rsa/simlab.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "rsa/parallel.hpp"

namespace rsa {

namespace {

void validate_dgp(const DgpConfig& cfg) {
  if (cfg.N < 1 || cfg.K < 1) throw invalid_input("N and K must be at least 1");
  if (cfg.K_star < 1 || cfg.K_star > cfg.K) {
    throw invalid_input("K_star must satisfy 1 <= K_star <= K");
  }
  if (!(cfg.rho > -1.0 && cfg.rho < 1.0)) throw invalid_input("rho must lie in (-1, 1)");
  if (!cfg.explicit_sigma2 && !(cfg.snr > 0.0 && cfg.snr < 1.0)) {
    throw invalid_input("snr must lie in (0, 1)");
  }
  if (cfg.explicit_sigma2 && !(cfg.sigma2 > 0.0)) {
    throw invalid_input("explicit sigma2 must be positive");
  }
}

Eigen::VectorXd gaussian_vector(int n, RngStream& rng) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.next_gaussian();
  return v;
}

Eigen::MatrixXd gaussian_matrix(int rows, int cols, RngStream& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rng.next_gaussian();
  }
  return m;
}

// Thin Q of a Gaussian matrix with column signs fixed by the R diagonal.
Eigen::MatrixXd random_orthonormal(int rows, int cols, RngStream& rng) {
  const Eigen::MatrixXd Z = gaussian_matrix(rows, cols, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Z);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
  const Eigen::MatrixXd R = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (int j = 0; j < cols; ++j) {
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  }
  return Q;
}

}  // namespace

Eigen::VectorXd gen_coefficients(const DgpConfig& cfg, RngStream& rng) {
  validate_dgp(cfg);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(cfg.K);
  for (int j = 1; j <= cfg.K_star; ++j) {
    const double v = cfg.decay == Decay::poly
                         ? std::pow(static_cast<double>(j), -cfg.decay_alpha)
                         : std::exp(-std::pow(static_cast<double>(j), cfg.decay_alpha));
    beta(j - 1) = v;
  }
  if (cfg.placement == Placement::random) {
    for (int i = cfg.K - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i + 1)));
      std::swap(beta(i), beta(j));
    }
  }
  return beta;
}

Eigen::MatrixXd gen_covariance(const DgpConfig& cfg, RngStream& rng) {
  validate_dgp(cfg);
  const int K = cfg.K;
  switch (cfg.cov) {
    case CovKind::ar1: {
      Eigen::MatrixXd S(K, K);
      for (int i = 0; i < K; ++i) {
        for (int j = 0; j < K; ++j) S(i, j) = std::pow(cfg.rho, std::abs(i - j));
      }
      return S;
    }
    case CovKind::random: {
      const Eigen::MatrixXd Q = random_orthonormal(K, K, rng);
      Eigen::VectorXd lambda(K);
      for (int i = 0; i < K; ++i) lambda(i) = 0.1 + 1.9 * rng.next_double();
      lambda *= static_cast<double>(K) / lambda.sum();  // unit average spectrum
      Eigen::MatrixXd S = Q * lambda.asDiagonal() * Q.transpose();
      return 0.5 * (S + S.transpose());
    }
    case CovKind::orthogonal:
      return Eigen::MatrixXd::Identity(K, K);
  }
  throw invalid_input("unknown covariance kind");
}

Eigen::MatrixXd sample_design(const Eigen::MatrixXd& Sigma, int N, RngStream& rng) {
  if (Sigma.rows() != Sigma.cols() || Sigma.rows() < 1) {
    throw invalid_input("Sigma must be square and non-empty");
  }
  if (N < 1) throw invalid_input("N must be at least 1");
  const int K = static_cast<int>(Sigma.rows());

  Eigen::MatrixXd L;
  Eigen::LLT<Eigen::MatrixXd> llt(Sigma);
  if (llt.info() == Eigen::Success) {
    L = llt.matrixL();
  } else {
    // Semi-definite or slightly asymmetric input: factor via eigenvalues.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (Sigma + Sigma.transpose()));
    const Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
    L = eig.eigenvectors() * lam.cwiseSqrt().asDiagonal();
  }
  const Eigen::MatrixXd Z = gaussian_matrix(N, K, rng);
  return Z * L.transpose();
}

Eigen::MatrixXd make_orthogonal_design(int N, int K, RngStream& rng) {
  if (K < 1 || N < 1) throw invalid_input("N and K must be at least 1");
  if (K > N) throw invalid_input("orthogonal design needs K <= N");
  const Eigen::MatrixXd Q = random_orthonormal(N, K, rng);
  Eigen::MatrixXd X = std::sqrt(static_cast<double>(N)) * Q;
  const Eigen::MatrixXd gram = X.transpose() * X;
  const double err = (gram - static_cast<double>(N) *
                                 Eigen::MatrixXd::Identity(K, K))
                         .cwiseAbs()
                         .maxCoeff();
  if (err > 1e-8 * static_cast<double>(N)) {
    throw degenerate_error("orthogonalization failed to reach tolerance");
  }
  return X;
}

double calibrate_sigma(const Eigen::VectorXd& beta, const Eigen::MatrixXd& Sigma,
                       double snr) {
  if (!(snr > 0.0 && snr < 1.0)) throw invalid_input("snr must lie in (0, 1)");
  if (Sigma.rows() != beta.size() || Sigma.cols() != beta.size()) {
    throw invalid_input("Sigma shape does not match beta");
  }
  const double signal = beta.dot(Sigma * beta);
  if (!(signal > 0.0)) throw degenerate_error("zero signal; cannot calibrate sigma");
  return signal * (1.0 - snr) / snr;
}

Method make_rsa_method(std::string name, RsaConfig config) {
  return Method{std::move(name),
                [config](const Dataset& train, std::uint64_t fit_seed) {
                  RsaConfig cfg = config;
                  cfg.seed = fit_seed;
                  return fit_rsa(train, cfg).beta_agg;
                }};
}

Method make_rsr_method(std::string name, int P, int B) {
  return Method{std::move(name), [P, B](const Dataset& train, std::uint64_t fit_seed) {
                  return fit_rsr(train, P, B, fit_seed).beta_agg;
                }};
}

Method make_mma_method(std::string name) {
  return Method{std::move(name), [](const Dataset& train, std::uint64_t) {
                  return fit_nested_mma(train).beta_agg;
                }};
}

Method make_rpr_method(std::string name, int P, int B) {
  return Method{std::move(name), [P, B](const Dataset& train, std::uint64_t fit_seed) {
                  return fit_rpr(train, P, B, fit_seed).beta_agg;
                }};
}

Method make_naive_method(std::string name, Eigen::VectorXd probs, int M, int L) {
  return Method{std::move(name),
                [probs = std::move(probs), M, L](const Dataset& train,
                                                 std::uint64_t fit_seed) {
                  const Eigen::VectorXd p = broadcast_probs(probs, train.cols());
                  return fit_naive(train, draw_ensemble(p, M, L, fit_seed)).beta_agg;
                }};
}

Method make_ols_method(std::string name) {
  return Method{std::move(name), [](const Dataset& train, std::uint64_t) {
                  const LsqSolution sol = least_squares_min_norm(train.X, train.y);
                  return sol.beta;
                }};
}

namespace {

struct RepOutcome {
  std::vector<double> msfe;
  std::vector<double> mse;
  std::vector<std::string> error;  // empty when the method succeeded
};

void summarize(const std::vector<double>& values, double* mean, double* sd) {
  int n = 0;
  double sum = 0.0;
  for (double v : values) {
    if (std::isfinite(v)) {
      sum += v;
      ++n;
    }
  }
  *mean = n > 0 ? sum / n : std::numeric_limits<double>::quiet_NaN();
  if (n < 2) {
    *sd = 0.0;  // one replication reports zero spread by convention
    return;
  }
  double ss = 0.0;
  for (double v : values) {
    if (std::isfinite(v)) ss += (v - *mean) * (v - *mean);
  }
  *sd = std::sqrt(ss / (n - 1));
}

}  // namespace

std::vector<ExperimentResult> run_experiment(const DgpConfig& dgp,
                                             const std::vector<Method>& methods,
                                             int reps, std::uint64_t seed,
                                             int threads) {
  validate_dgp(dgp);
  if (reps < 1) throw invalid_input("reps must be at least 1");
  if (methods.empty()) throw invalid_input("need at least one method");

  RngStream coef_rng(dgp.seed, stream_tag::kCoefficients, 0);
  const Eigen::VectorXd beta = gen_coefficients(dgp, coef_rng);
  RngStream cov_rng(dgp.seed, stream_tag::kCovariance, 0);
  const Eigen::MatrixXd Sigma = gen_covariance(dgp, cov_rng);
  const double sigma2 =
      dgp.explicit_sigma2 ? dgp.sigma2 : calibrate_sigma(beta, Sigma, dgp.snr);
  const double sigma = std::sqrt(sigma2);

  const int n_test = (dgp.N + 1) / 2;  // train:test = 2:1
  const std::size_t n_methods = methods.size();

  std::vector<RepOutcome> outcomes(static_cast<std::size_t>(reps));
  parallel_for(static_cast<std::size_t>(reps), threads, [&](std::size_t r) {
    const std::uint64_t rep = static_cast<std::uint64_t>(r);
    RngStream train_rng(seed, stream_tag::kTrainDesign, rep);
    RngStream test_rng(seed, stream_tag::kTestDesign, rep);
    Eigen::MatrixXd Xtr, Xte;
    if (dgp.cov == CovKind::orthogonal) {
      Xtr = make_orthogonal_design(dgp.N, dgp.K, train_rng);
      Xte = make_orthogonal_design(std::max(n_test, dgp.K), dgp.K, test_rng)
                .topRows(n_test);
    } else {
      Xtr = sample_design(Sigma, dgp.N, train_rng);
      Xte = sample_design(Sigma, n_test, test_rng);
    }
    const Eigen::VectorXd mu_tr = Xtr * beta;
    const Eigen::VectorXd mu_te = Xte * beta;
    RngStream noise_rng(seed, stream_tag::kNoise, rep);
    const Eigen::VectorXd y = mu_tr + sigma * gaussian_vector(dgp.N, noise_rng);
    const Dataset train{Xtr, y};
    const std::uint64_t fit_seed = RngStream(seed, stream_tag::kFitSeed, rep).next_u64();

    RepOutcome& out = outcomes[r];
    out.msfe.assign(n_methods, std::numeric_limits<double>::quiet_NaN());
    out.mse.assign(n_methods, std::numeric_limits<double>::quiet_NaN());
    out.error.assign(n_methods, "");
    for (std::size_t m = 0; m < n_methods; ++m) {
      try {
        const Eigen::VectorXd bhat = methods[m].fit_beta(train, fit_seed);
        if (bhat.size() != dgp.K) throw degenerate_error("method returned wrong length");
        out.msfe[m] = (Xte * bhat - mu_te).squaredNorm() / n_test;
        out.mse[m] = (Xtr * bhat - mu_tr).squaredNorm() / dgp.N;
      } catch (const std::exception& e) {
        out.error[m] = e.what();
      }
    }
  });

  std::vector<ExperimentResult> results(n_methods);
  for (std::size_t m = 0; m < n_methods; ++m) {
    ExperimentResult& res = results[m];
    res.method = methods[m].name;
    res.reps = reps;
    res.msfe.resize(static_cast<std::size_t>(reps));
    res.mse.resize(static_cast<std::size_t>(reps));
    for (int r = 0; r < reps; ++r) {
      res.msfe[static_cast<std::size_t>(r)] = outcomes[static_cast<std::size_t>(r)].msfe[m];
      res.mse[static_cast<std::size_t>(r)] = outcomes[static_cast<std::size_t>(r)].mse[m];
      if (!outcomes[static_cast<std::size_t>(r)].error[m].empty() && res.ok) {
        res.ok = false;
        res.error = outcomes[static_cast<std::size_t>(r)].error[m];
      }
    }
    summarize(res.msfe, &res.msfe_mean, &res.msfe_sd);
    summarize(res.mse, &res.mse_mean, &res.mse_sd);
  }
  return results;
}

std::vector<HorizonResult> rolling_forecast(const Dataset& data, int window,
                                            const std::vector<int>& horizons,
                                            const Method& method,
                                            std::uint64_t seed, int threads) {
  if (window < 1) throw invalid_input("window must be at least 1");
  if (horizons.empty()) throw invalid_input("need at least one horizon");
  for (int h : horizons) {
    if (h < 1) throw invalid_input("horizons must be at least 1");
  }
  const int N = static_cast<int>(data.rows());
  const int max_h = *std::max_element(horizons.begin(), horizons.end());
  if (window + max_h > N) {
    throw degenerate_error("insufficient rows for the rolling protocol");
  }

  const int n_origins = N - max_h - window + 1;
  const std::size_t n_h = horizons.size();
  // errors[origin * n_h + h_index]
  std::vector<double> sqerr(static_cast<std::size_t>(n_origins) * n_h, 0.0);

  parallel_for(static_cast<std::size_t>(n_origins), threads, [&](std::size_t o) {
    const int t0 = window - 1 + static_cast<int>(o);  // last training row
    const Dataset train{data.X.middleRows(t0 - window + 1, window),
                        data.y.segment(t0 - window + 1, window)};
    const std::uint64_t fit_seed = RngStream(seed, stream_tag::kFitSeed, o).next_u64();
    const Eigen::VectorXd bhat = method.fit_beta(train, fit_seed);
    for (std::size_t hi = 0; hi < n_h; ++hi) {
      const int t = t0 + horizons[hi];
      const double pred = data.X.row(t).dot(bhat);
      const double err = pred - data.y(t);
      sqerr[o * n_h + hi] = err * err;
    }
  });

  std::vector<HorizonResult> table(n_h);
  for (std::size_t hi = 0; hi < n_h; ++hi) {
    std::vector<double> errs(static_cast<std::size_t>(n_origins));
    for (int o = 0; o < n_origins; ++o) {
      errs[static_cast<std::size_t>(o)] = sqerr[static_cast<std::size_t>(o) * n_h + hi];
    }
    HorizonResult& row = table[hi];
    row.horizon = horizons[hi];
    row.n_forecasts = n_origins;
    summarize(errs, &row.msfe_mean, &row.msfe_sd);
  }
  return table;
}

}  // namespace rsa
