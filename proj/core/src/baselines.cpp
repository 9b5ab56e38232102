#include "rsa/baselines.hpp"

#include <algorithm>
#include <utility>

namespace rsa {

BaselineModel fit_rsr(const Dataset& dataset, int P, int B, std::uint64_t seed,
                      double rtol) {
  const int K = static_cast<int>(dataset.cols());
  if (P < 1 || P > K) throw invalid_input("RSR subset size must satisfy 1 <= P <= K");
  if (B < 1) throw invalid_input("RSR needs at least one draw");

  BaselineModel model;
  model.kind = BaselineKind::rsr;
  model.P = P;
  model.B = B;
  model.beta_agg = Eigen::VectorXd::Zero(K);
  model.fitted = Eigen::VectorXd::Zero(dataset.rows());
  model.masks.reserve(static_cast<std::size_t>(B));
  for (int b = 0; b < B; ++b) {
    RngStream rng(seed, stream_tag::kRsrMask, static_cast<std::uint64_t>(b));
    model.masks.push_back(fixed_size_mask(P, K, rng));
  }
  const std::vector<CandidateFit> fits = fit_candidates(dataset, model.masks, rtol);
  for (const CandidateFit& fit : fits) {
    model.beta_agg += fit.beta_padded;
    model.fitted += fit.fitted;
  }
  model.beta_agg /= static_cast<double>(B);
  model.fitted /= static_cast<double>(B);
  return model;
}

BaselineModel fit_nested_mma(const Dataset& dataset, double rtol, double qp_tol) {
  const Eigen::Index N = dataset.rows();
  const int K = static_cast<int>(dataset.cols());
  if (N < 4) throw degenerate_error("nested MMA needs at least 4 observations");

  const int cap = std::min<int>(K, static_cast<int>(N) - 2);
  BaselineModel model;
  model.kind = BaselineKind::mma;
  model.masks = nested_masks(K, cap);

  const double sigma2 = estimate_sigma2(dataset, rtol);
  const std::vector<CandidateFit> fits = fit_candidates(dataset, model.masks, rtol);

  MallowsProblem problem;
  problem.F.resize(N, static_cast<Eigen::Index>(fits.size()));
  problem.dims.resize(static_cast<Eigen::Index>(fits.size()));
  for (std::size_t m = 0; m < fits.size(); ++m) {
    problem.F.col(static_cast<Eigen::Index>(m)) = fits[m].fitted;
    problem.dims(static_cast<Eigen::Index>(m)) = fits[m].k;
  }
  problem.sigma2 = sigma2;
  problem.y = dataset.y;
  model.weights = solve_simplex_qp(problem, qp_tol);

  model.beta_agg = Eigen::VectorXd::Zero(K);
  model.fitted = Eigen::VectorXd::Zero(N);
  for (std::size_t m = 0; m < fits.size(); ++m) {
    const double wm = model.weights.w(static_cast<Eigen::Index>(m));
    model.beta_agg += wm * fits[m].beta_padded;
    model.fitted += wm * fits[m].fitted;
  }
  return model;
}

BaselineModel fit_rpr(const Dataset& dataset, int P, int B, std::uint64_t seed,
                      double rtol, const ProjectionOverride& projection) {
  const int K = static_cast<int>(dataset.cols());
  if (P < 1) throw invalid_input("RPR projection dimension must be at least 1");
  if (B < 1) throw invalid_input("RPR needs at least one draw");

  BaselineModel model;
  model.kind = BaselineKind::rpr;
  model.P = P;
  model.B = B;
  model.beta_agg = Eigen::VectorXd::Zero(K);
  model.fitted = Eigen::VectorXd::Zero(dataset.rows());
  for (int b = 0; b < B; ++b) {
    Eigen::MatrixXd R;
    if (projection) {
      R = projection(b);
      if (R.rows() != K || R.cols() != P) {
        throw invalid_input("projection override has the wrong shape");
      }
    } else {
      RngStream rng(seed, stream_tag::kRprProjection, static_cast<std::uint64_t>(b));
      R = gaussian_projection(K, P, rng);
    }
    const Eigen::MatrixXd Z = dataset.X * R;
    const LsqSolution sol = least_squares_min_norm(Z, dataset.y, rtol);
    model.beta_agg += R * sol.beta;
    model.fitted += Z * sol.beta;
  }
  model.beta_agg /= static_cast<double>(B);
  model.fitted /= static_cast<double>(B);
  return model;
}

BaselineModel fit_naive(const Dataset& dataset, const MaskEnsemble& ensemble,
                        double rtol) {
  if (ensemble.groups.empty() || ensemble.groups[0].empty()) {
    throw invalid_input("ensemble must contain at least one mask");
  }
  BaselineModel model;
  model.kind = BaselineKind::naive;
  for (const auto& group : ensemble.groups) {
    model.masks.insert(model.masks.end(), group.begin(), group.end());
  }
  const std::vector<CandidateFit> fits = fit_candidates(dataset, model.masks, rtol);
  model.beta_agg = Eigen::VectorXd::Zero(dataset.cols());
  model.fitted = Eigen::VectorXd::Zero(dataset.rows());
  for (const CandidateFit& fit : fits) {
    model.beta_agg += fit.beta_padded;
    model.fitted += fit.fitted;
  }
  const double count = static_cast<double>(fits.size());
  model.beta_agg /= count;
  model.fitted /= count;
  return model;
}

}  // namespace rsa
