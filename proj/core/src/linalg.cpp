#include "rsa/linalg.hpp"

#include <Eigen/SVD>
#include <string>

namespace rsa {

namespace {

void require_finite(const Eigen::Ref<const Eigen::MatrixXd>& m, const char* name) {
  if (!m.allFinite()) {
    throw invalid_input(std::string(name) + " contains non-finite entries");
  }
}

void require_rtol(double rtol) {
  if (!(rtol > 0.0 && rtol < 1.0)) {
    throw invalid_input("rtol must lie in (0, 1)");
  }
}

}  // namespace

Dataset make_dataset(Eigen::MatrixXd X, Eigen::VectorXd y) {
  if (X.rows() < 1 || X.cols() < 1) {
    throw invalid_input("dataset needs N >= 1 rows and K >= 1 columns");
  }
  if (y.size() != X.rows()) {
    throw invalid_input("response length does not match design row count");
  }
  require_finite(X, "design matrix");
  require_finite(y, "response");
  return Dataset{std::move(X), std::move(y)};
}

LsqSolution least_squares_min_norm(const Eigen::MatrixXd& Xsub,
                                   const Eigen::VectorXd& y, double rtol) {
  require_rtol(rtol);
  if (Xsub.rows() != y.size()) {
    throw invalid_input("design rows do not match response length");
  }
  require_finite(Xsub, "design matrix");
  require_finite(y, "response");

  const Eigen::Index k = Xsub.cols();
  LsqSolution out;
  if (k == 0) {
    out.beta = Eigen::VectorXd(0);
    out.rank = 0;
    out.rss = y.squaredNorm();
    return out;
  }

  // Fast path for clearly full-rank problems: normal equations via LDLT.
  // The spectral gate is far above the rank cutoff, so any matrix the gate
  // accepts has the same rank (= k) under the singular-value rule, and the
  // solution is the unique least-squares minimizer.
  if (k <= Xsub.rows() && rtol <= 1e-8) {
    const Eigen::MatrixXd gram = Xsub.transpose() * Xsub;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() == Eigen::Success) {
      const Eigen::VectorXd d = ldlt.vectorD();
      const double dmax = d.maxCoeff();
      if (dmax > 0.0 && d.minCoeff() > 1e-10 * dmax) {
        out.beta = ldlt.solve(Xsub.transpose() * y);
        out.rank = k;
        out.rss = (y - Xsub * out.beta).squaredNorm();
        return out;
      }
    }
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(Xsub, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const double cutoff = rtol * smax;

  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) ++rank;
  }

  out.beta = Eigen::VectorXd::Zero(k);
  if (rank > 0) {
    const Eigen::VectorXd uty = svd.matrixU().leftCols(rank).transpose() * y;
    out.beta = svd.matrixV().leftCols(rank) *
               (uty.array() / s.head(rank).array()).matrix();
  }
  out.rank = rank;
  out.rss = (y - Xsub * out.beta).squaredNorm();
  return out;
}

Eigen::VectorXd fitted_values(const Eigen::MatrixXd& Xsub,
                              const LsqSolution& solution) {
  if (solution.beta.size() != Xsub.cols()) {
    throw invalid_input("solution does not match design column count");
  }
  if (Xsub.cols() == 0) {
    return Eigen::VectorXd::Zero(Xsub.rows());
  }
  return Xsub * solution.beta;
}

Eigen::Index projection_dim(const Eigen::MatrixXd& Xsub, double rtol) {
  require_rtol(rtol);
  require_finite(Xsub, "design matrix");
  if (Xsub.cols() == 0 || Xsub.rows() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(Xsub);
  const Eigen::VectorXd& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const double cutoff = rtol * smax;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) ++rank;
  }
  return rank;
}

}  // namespace rsa
