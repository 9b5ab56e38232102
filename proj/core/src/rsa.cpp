#include "rsa/rsa.hpp"

#include <utility>

#include "rsa/parallel.hpp"

namespace rsa {

Eigen::VectorXd broadcast_probs(const Eigen::VectorXd& probs, Eigen::Index K) {
  if (probs.size() == K) return probs;
  if (probs.size() == 1) return Eigen::VectorXd::Constant(K, probs(0));
  throw invalid_input("probs must have length K or be a single broadcast value");
}

Eigen::MatrixXd masked_columns(const Eigen::MatrixXd& X, const SelectionMask& mask) {
  if (mask.size() != X.cols()) {
    throw invalid_input("mask length does not match design column count");
  }
  Eigen::MatrixXd sub(X.rows(), mask.k);
  Eigen::Index col = 0;
  for (int j = 0; j < mask.size(); ++j) {
    if (mask.bits[static_cast<std::size_t>(j)]) sub.col(col++) = X.col(j);
  }
  return sub;
}

std::vector<CandidateFit> fit_candidates(const Dataset& dataset,
                                         const std::vector<SelectionMask>& masks,
                                         double rtol) {
  if (masks.empty()) throw invalid_input("need at least one mask");
  std::vector<CandidateFit> fits;
  fits.reserve(masks.size());
  for (const SelectionMask& mask : masks) {
    const Eigen::MatrixXd Xsub = masked_columns(dataset.X, mask);
    const LsqSolution sol = least_squares_min_norm(Xsub, dataset.y, rtol);
    CandidateFit fit;
    fit.mask = mask;
    fit.beta_padded = Eigen::VectorXd::Zero(dataset.cols());
    Eigen::Index col = 0;
    for (int j = 0; j < mask.size(); ++j) {
      if (mask.bits[static_cast<std::size_t>(j)]) fit.beta_padded(j) = sol.beta(col++);
    }
    fit.fitted = fitted_values(Xsub, sol);
    fit.k = static_cast<double>(sol.rank);
    fits.push_back(std::move(fit));
  }
  return fits;
}

GroupFit fit_group(const Dataset& dataset, std::vector<CandidateFit> candidates,
                   double sigma2, FirstRound scheme, double qp_tol) {
  if (candidates.empty()) throw invalid_input("need at least one candidate");
  const Eigen::Index M = static_cast<Eigen::Index>(candidates.size());
  GroupFit group;
  if (scheme == FirstRound::uniform) {
    group.weights.w = Eigen::VectorXd::Constant(M, 1.0 / static_cast<double>(M));
  } else {
    MallowsProblem problem;
    problem.F.resize(dataset.rows(), M);
    problem.dims.resize(M);
    for (Eigen::Index m = 0; m < M; ++m) {
      problem.F.col(m) = candidates[static_cast<std::size_t>(m)].fitted;
      problem.dims(m) = candidates[static_cast<std::size_t>(m)].k;
    }
    problem.sigma2 = sigma2;
    problem.y = dataset.y;
    group.weights = solve_simplex_qp(problem, qp_tol);
  }
  group.fitted = Eigen::VectorXd::Zero(dataset.rows());
  group.effective_dim = 0.0;
  for (Eigen::Index m = 0; m < M; ++m) {
    const auto& cand = candidates[static_cast<std::size_t>(m)];
    group.fitted += group.weights.w(m) * cand.fitted;
    group.effective_dim += group.weights.w(m) * cand.k;
  }
  group.candidates = std::move(candidates);
  return group;
}

RsaModel fit_rsa(const Dataset& dataset, const RsaConfig& config, int threads) {
  if (config.M < 1 || config.L < 1) throw invalid_input("M and L must be at least 1");
  const Eigen::VectorXd probs = broadcast_probs(config.probs, dataset.cols());

  double sigma2 = 0.0;
  if (config.sigma2_mode == Sigma2Mode::supplied) {
    if (!(config.sigma2_value > 0.0)) {
      throw invalid_input("supplied sigma2 must be positive");
    }
    sigma2 = config.sigma2_value;
  } else {
    sigma2 = estimate_sigma2(dataset, config.rtol);
  }

  const MaskEnsemble ensemble =
      draw_ensemble(probs, config.M, config.L, config.seed);

  RsaModel model;
  model.groups.resize(static_cast<std::size_t>(config.L));
  parallel_for(static_cast<std::size_t>(config.L), threads, [&](std::size_t l) {
    model.groups[l] = fit_group(
        dataset, fit_candidates(dataset, ensemble.groups[l], config.rtol),
        sigma2, config.first_round, config.qp_tol);
  });

  MallowsProblem outer;
  outer.F.resize(dataset.rows(), config.L);
  outer.dims.resize(config.L);
  for (int l = 0; l < config.L; ++l) {
    outer.F.col(l) = model.groups[static_cast<std::size_t>(l)].fitted;
    outer.dims(l) = model.groups[static_cast<std::size_t>(l)].effective_dim;
  }
  outer.sigma2 = sigma2;
  outer.y = dataset.y;
  model.outer_weights = solve_simplex_qp(outer, config.qp_tol);

  model.fitted = Eigen::VectorXd::Zero(dataset.rows());
  model.beta_agg = Eigen::VectorXd::Zero(dataset.cols());
  for (int l = 0; l < config.L; ++l) {
    const auto& group = model.groups[static_cast<std::size_t>(l)];
    const double wl = model.outer_weights.w(l);
    model.fitted += wl * group.fitted;
    for (Eigen::Index m = 0; m < group.weights.w.size(); ++m) {
      model.beta_agg += wl * group.weights.w(m) *
                        group.candidates[static_cast<std::size_t>(m)].beta_padded;
    }
  }
  model.sigma2 = sigma2;
  model.config = config;
  model.config.probs = probs;
  return model;
}

Eigen::VectorXd predict(const RsaModel& model, const Eigen::MatrixXd& Xnew) {
  if (Xnew.cols() != model.beta_agg.size()) {
    throw invalid_input("new data column count does not match the model");
  }
  return Xnew * model.beta_agg;
}

}  // namespace rsa
