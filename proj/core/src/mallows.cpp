#include "rsa/mallows.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace rsa {

double estimate_sigma2(const Dataset& dataset, double rtol) {
  const Eigen::Index N = dataset.rows();
  const Eigen::Index kstar = std::min<Eigen::Index>(dataset.cols(), N / 2);
  if (kstar < 1) {
    throw degenerate_error("sample too small to estimate sigma^2");
  }
  const LsqSolution sol = least_squares_min_norm(dataset.X.leftCols(kstar), dataset.y, rtol);
  const Eigen::Index dof = N - sol.rank;
  if (dof <= 0) {
    throw degenerate_error("no residual degrees of freedom for sigma^2");
  }
  return std::max(sol.rss / static_cast<double>(dof), kSigma2Floor);
}

namespace {

void validate_problem(const MallowsProblem& p) {
  if (p.F.cols() != p.dims.size()) {
    throw invalid_input("dims length does not match candidate count");
  }
  if (p.F.rows() != p.y.size()) {
    throw invalid_input("prediction rows do not match response length");
  }
  if (p.F.cols() < 1) throw invalid_input("need at least one candidate");
  if (!p.F.allFinite() || !p.dims.allFinite() || !p.y.allFinite() ||
      !std::isfinite(p.sigma2)) {
    throw invalid_input("non-finite Mallows problem data");
  }
  if (!(p.sigma2 > 0.0)) throw invalid_input("sigma2 must be positive");
  if ((p.dims.array() < 0.0).any()) throw invalid_input("dims must be nonnegative");
}

// q(w) = w'Aw - 2u'w; the criterion equals q(w) + ||y||^2.
struct QuadForm {
  Eigen::MatrixXd A;
  Eigen::VectorXd u;
  double y2 = 0.0;

  double value(const Eigen::VectorXd& w) const {
    return w.dot(A * w) - 2.0 * u.dot(w);
  }
  Eigen::VectorXd gradient(const Eigen::VectorXd& w) const {
    return 2.0 * (A * w - u);
  }
};

QuadForm build_quadform(const MallowsProblem& p) {
  QuadForm q;
  q.A = p.F.transpose() * p.F;
  q.u = p.F.transpose() * p.y - p.sigma2 * p.dims;
  q.y2 = p.y.squaredNorm();
  return q;
}

// Orthonormal basis of {z : 1'z = 0} in R^s, as columns 2..s of the
// Householder reflector sending e1 to 1/sqrt(s).
Eigen::MatrixXd sum_zero_basis(Eigen::Index s) {
  Eigen::VectorXd v = Eigen::VectorXd::Constant(s, 1.0 / std::sqrt(static_cast<double>(s)));
  v(0) -= 1.0;
  const double vtv = v.squaredNorm();
  Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(s, s);
  if (vtv > 0.0) Q -= (2.0 / vtv) * (v * v.transpose());
  return Q.rightCols(s - 1);
}

struct SubproblemResult {
  bool unbounded = false;
  Eigen::VectorXd x;          // bounded case: affine minimizer (min-norm)
  Eigen::VectorXd descent;    // unbounded case: sum-zero descent direction
  bool hessian_singular = false;
};

// Minimize x'A_SS x - 2 u_S'x subject to 1'x = 1, unconstrained in sign.
// Singular reduced Hessians yield the minimum-norm minimizer, or a descent
// ray when the objective is unbounded below on the affine set.
SubproblemResult solve_equality_subproblem(const QuadForm& q,
                                           const std::vector<int>& S) {
  const Eigen::Index s = static_cast<Eigen::Index>(S.size());
  SubproblemResult out;
  if (s == 1) {
    out.x = Eigen::VectorXd::Ones(1);
    return out;
  }
  Eigen::MatrixXd Ass(s, s);
  Eigen::VectorXd us(s);
  for (Eigen::Index i = 0; i < s; ++i) {
    us(i) = q.u(S[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < s; ++j) {
      Ass(i, j) = q.A(S[static_cast<std::size_t>(i)], S[static_cast<std::size_t>(j)]);
    }
  }
  const Eigen::MatrixXd Z = sum_zero_basis(s);
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(s, 1.0 / static_cast<double>(s));
  const Eigen::MatrixXd H = Z.transpose() * Ass * Z;
  const Eigen::VectorXd rhs = -Z.transpose() * (Ass * c - us);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
  const Eigen::VectorXd& lam = eig.eigenvalues();
  const Eigen::MatrixXd& V = eig.eigenvectors();
  const double lmax = std::max(lam.maxCoeff(), 0.0);
  const double cut = lmax * 1e-12;

  Eigen::VectorXd t = Eigen::VectorXd::Zero(s - 1);
  Eigen::VectorXd null_part = rhs;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) > cut) {
      const double proj = V.col(i).dot(rhs);
      t += V.col(i) * (proj / lam(i));
      null_part -= V.col(i) * proj;
    } else {
      out.hessian_singular = true;
    }
  }
  const double consist_tol = 1e-10 * (1.0 + rhs.norm() + lmax);
  if (null_part.norm() > consist_tol) {
    // Objective decreases without bound along Z*null_part.
    out.unbounded = true;
    out.descent = Z * null_part;
    out.descent /= out.descent.norm();
    return out;
  }
  out.x = c + Z * t;
  return out;
}

// Minimum-norm point of the optimal face through w_star. The face is cut out
// by A w = A w_star and u'w = u'w_star inside the simplex restricted to the
// candidate index set T.
bool min_norm_on_face(const QuadForm& q, const Eigen::VectorXd& w_star,
                      std::vector<int> T, Eigen::VectorXd* w_out) {
  const Eigen::Index M = w_star.size();
  const Eigen::VectorXd Aw = q.A * w_star;
  const double uw = q.u.dot(w_star);
  for (std::size_t round = 0; round <= T.size() + 1 && !T.empty(); ++round) {
    const Eigen::Index tsz = static_cast<Eigen::Index>(T.size());
    Eigen::MatrixXd E(M + 2, tsz);
    Eigen::VectorXd f(M + 2);
    for (Eigen::Index j = 0; j < tsz; ++j) {
      E(0, j) = 1.0;
      E.block(1, j, M, 1) = q.A.col(T[static_cast<std::size_t>(j)]);
      E(M + 1, j) = q.u(T[static_cast<std::size_t>(j)]);
    }
    f(0) = 1.0;
    f.segment(1, M) = Aw;
    f(M + 1) = uw;

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(E);
    const Eigen::VectorXd xT = cod.solve(f);
    if ((E * xT - f).norm() > 1e-8 * (1.0 + f.norm())) return false;

    Eigen::Index worst = -1;
    double worst_val = -1e-10;
    for (Eigen::Index j = 0; j < tsz; ++j) {
      if (xT(j) < worst_val) {
        worst_val = xT(j);
        worst = j;
      }
    }
    if (worst < 0) {
      Eigen::VectorXd w = Eigen::VectorXd::Zero(M);
      for (Eigen::Index j = 0; j < tsz; ++j) {
        w(T[static_cast<std::size_t>(j)]) = std::max(xT(j), 0.0);
      }
      *w_out = w;
      return true;
    }
    // A face coordinate went negative: shrink the candidate set unless the
    // coordinate carries real weight in w_star.
    if (w_star(T[static_cast<std::size_t>(worst)]) > 1e-10) return false;
    T.erase(T.begin() + worst);
  }
  return false;
}

void clamp_to_simplex(Eigen::VectorXd* w) {
  for (Eigen::Index i = 0; i < w->size(); ++i) {
    (*w)(i) = std::min(std::max((*w)(i), 0.0), 1.0);
  }
  const double s = w->sum();
  if (s > 0.0) *w /= s;
}

}  // namespace

double mallows_criterion(const MallowsProblem& problem, const SimplexWeights& w) {
  validate_problem(problem);
  if (w.w.size() != problem.F.cols()) {
    throw invalid_input("weight length does not match candidate count");
  }
  return (problem.y - problem.F * w.w).squaredNorm() +
         2.0 * problem.sigma2 * problem.dims.dot(w.w);
}

SimplexWeights solve_simplex_qp(const MallowsProblem& problem, double tol) {
  validate_problem(problem);
  if (!(tol > 0.0 && tol <= 1e-2)) throw invalid_input("tol must lie in (0, 1e-2]");

  const Eigen::Index M = problem.F.cols();
  if (M == 1) return SimplexWeights{Eigen::VectorXd::Ones(1)};

  const QuadForm q = build_quadform(problem);

  // Start at the best vertex; the active-set iteration only ever descends,
  // which pins the vertex-dominance guarantee.
  Eigen::Index best_vertex = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (Eigen::Index m = 0; m < M; ++m) {
    const double val = q.A(m, m) - 2.0 * q.u(m);
    if (val < best_val) {
      best_val = val;
      best_vertex = m;
    }
  }

  Eigen::VectorXd w = Eigen::VectorXd::Zero(M);
  w(best_vertex) = 1.0;
  std::vector<int> S{static_cast<int>(best_vertex)};
  std::vector<bool> in_S(static_cast<std::size_t>(M), false);
  in_S[static_cast<std::size_t>(best_vertex)] = true;

  bool last_hessian_singular = false;
  const long max_iter = 40 * static_cast<long>(M) + 400;

  auto drop_index = [&](std::size_t pos_in_S) {
    in_S[static_cast<std::size_t>(S[pos_in_S])] = false;
    w(S[pos_in_S]) = 0.0;
    S.erase(S.begin() + static_cast<std::ptrdiff_t>(pos_in_S));
  };

  // Moves w along d (supported on S) until the subproblem minimizer or the
  // first zero bound; returns the position of the blocking index, or -1.
  auto ratio_step = [&](const Eigen::VectorXd& d, double max_alpha) -> std::ptrdiff_t {
    double alpha = max_alpha;
    std::ptrdiff_t blocker = -1;
    for (std::size_t i = 0; i < S.size(); ++i) {
      const double di = d(static_cast<Eigen::Index>(i));
      if (di < -1e-15) {
        const double a = -w(S[i]) / di;
        if (a < alpha) {
          alpha = a;
          blocker = static_cast<std::ptrdiff_t>(i);
        }
      }
    }
    alpha = std::max(alpha, 0.0);
    if (!std::isfinite(alpha)) return blocker;
    for (std::size_t i = 0; i < S.size(); ++i) {
      w(S[i]) += alpha * d(static_cast<Eigen::Index>(i));
      if (w(S[i]) < 0.0) w(S[i]) = 0.0;
    }
    return blocker;
  };

  for (long iter = 0; iter < max_iter; ++iter) {
    const SubproblemResult sub = solve_equality_subproblem(q, S);
    last_hessian_singular = sub.hessian_singular;

    if (sub.unbounded) {
      const std::ptrdiff_t blocker =
          ratio_step(sub.descent, std::numeric_limits<double>::infinity());
      if (blocker < 0) break;  // cannot happen on a bounded simplex
      drop_index(static_cast<std::size_t>(blocker));
      continue;
    }

    double min_x = 0.0;
    for (Eigen::Index i = 0; i < sub.x.size(); ++i) min_x = std::min(min_x, sub.x(i));

    if (min_x < -1e-12) {
      Eigen::VectorXd d(sub.x.size());
      for (std::size_t i = 0; i < S.size(); ++i) {
        d(static_cast<Eigen::Index>(i)) = sub.x(static_cast<Eigen::Index>(i)) - w(S[i]);
      }
      const std::ptrdiff_t blocker = ratio_step(d, 1.0);
      if (blocker >= 0) {
        drop_index(static_cast<std::size_t>(blocker));
        continue;
      }
      // Fall through with the full step taken.
    } else {
      for (std::size_t i = 0; i < S.size(); ++i) {
        w(S[i]) = std::max(sub.x(static_cast<Eigen::Index>(i)), 0.0);
      }
    }

    // KKT: on S the gradient is constant (-lambda); off S the multiplier
    // mu_j = g_j + lambda is the directional derivative toward vertex j.
    const Eigen::VectorXd g = q.gradient(w);
    double lambda = 0.0;
    for (int idx : S) lambda -= g(idx);
    lambda /= static_cast<double>(S.size());

    Eigen::Index violator = -1;
    double worst = -0.25 * tol;
    for (Eigen::Index j = 0; j < M; ++j) {
      if (in_S[static_cast<std::size_t>(j)]) continue;
      const double mu = g(j) + lambda;
      if (mu < worst) {
        worst = mu;
        violator = j;
      }
    }
    if (violator < 0) break;
    S.push_back(static_cast<int>(violator));
    in_S[static_cast<std::size_t>(violator)] = true;
  }

  clamp_to_simplex(&w);

  // Tie-break: if the optimum sits on a flat face (singular reduced Hessian
  // or zero-multiplier coordinates off the support), return the face's
  // minimum-norm point.
  {
    const Eigen::VectorXd g = q.gradient(w);
    double lambda = 0.0;
    for (int idx : S) lambda -= g(idx);
    lambda /= static_cast<double>(std::max<std::size_t>(S.size(), 1));
    const double gscale = g.cwiseAbs().maxCoeff();
    const double face_tol = 1e-11 * (1.0 + gscale);

    std::vector<int> face;
    bool extended = false;
    for (Eigen::Index j = 0; j < M; ++j) {
      if (w(j) > 0.0) {
        face.push_back(static_cast<int>(j));
      } else if (std::abs(g(j) + lambda) <= face_tol) {
        face.push_back(static_cast<int>(j));
        extended = true;
      }
    }
    if (extended || last_hessian_singular) {
      Eigen::VectorXd w_face;
      if (min_norm_on_face(q, w, face, &w_face)) {
        clamp_to_simplex(&w_face);
        const double q_old = q.value(w);
        if (q.value(w_face) <= q_old + 1e-9 * (1.0 + std::abs(q_old))) {
          w = w_face;
        }
      }
    }
  }

  return SimplexWeights{w};
}

}  // namespace rsa
