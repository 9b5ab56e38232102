#include "rsa/risk_oracle.hpp"

#include <algorithm>
#include <cmath>

namespace rsa {

namespace {

void validate_spec(const RiskSpec& spec) {
  if (spec.beta.size() < 1) throw invalid_input("beta must be non-empty");
  if (!spec.beta.allFinite()) throw invalid_input("beta contains non-finite entries");
  if (!(spec.sigma2 > 0.0) || !std::isfinite(spec.sigma2)) {
    throw invalid_input("sigma2 must be positive and finite");
  }
  if (spec.N < 1) throw invalid_input("N must be at least 1");
}

double signal(const RiskSpec& spec) {
  return static_cast<double>(spec.N) * spec.beta.squaredNorm();
}

}  // namespace

double rsa_risk_fixed_p(const RiskSpec& spec) {
  validate_spec(spec);
  const double K = static_cast<double>(spec.beta.size());
  const double S = signal(spec);
  if (S == 0.0) return 0.0;
  return K * spec.sigma2 * S / (S + K * spec.sigma2);
}

double rsa_risk_varying_p(const RiskSpec& spec) {
  validate_spec(spec);
  const double N = static_cast<double>(spec.N);
  double total = 0.0;
  for (Eigen::Index j = 0; j < spec.beta.size(); ++j) {
    const double nb2 = N * spec.beta(j) * spec.beta(j);
    if (nb2 > 0.0) total += nb2 * spec.sigma2 / (nb2 + spec.sigma2);
  }
  return total;
}

double ma_risk(const RiskSpec& spec) {
  validate_spec(spec);
  const double N = static_cast<double>(spec.N);
  for (Eigen::Index j = 1; j < spec.beta.size(); ++j) {
    if (std::abs(spec.beta(j)) > std::abs(spec.beta(j - 1))) {
      throw invalid_input("ma_risk requires |beta_j| sorted non-increasing");
    }
  }
  double total = spec.sigma2;
  for (Eigen::Index j = 1; j < spec.beta.size(); ++j) {
    const double nb2 = N * spec.beta(j) * spec.beta(j);
    if (nb2 > 0.0) total += nb2 * spec.sigma2 / (nb2 + spec.sigma2);
  }
  return total;
}

double rsr_risk(const RiskSpec& spec, double P) {
  validate_spec(spec);
  const double K = static_cast<double>(spec.beta.size());
  if (!(P >= 0.0 && P <= K)) throw invalid_input("P must lie in [0, K]");
  const double S = signal(spec);
  return spec.sigma2 * P * P / K + S * (K - P) * (K - P) / (K * K);
}

double optimal_P(const RiskSpec& spec) {
  validate_spec(spec);
  const double K = static_cast<double>(spec.beta.size());
  const double S = signal(spec);
  if (S == 0.0) return 0.0;
  return K * S / (K * spec.sigma2 + S);
}

double optimal_p_fixed(const RiskSpec& spec, int M) {
  validate_spec(spec);
  if (M < 2) throw invalid_input("optimal_p_fixed needs M >= 2");
  const double K = static_cast<double>(spec.beta.size());
  const double S = signal(spec);
  const double Md = static_cast<double>(M);
  const double p = Md / (Md - 1.0) * S / (S + K * spec.sigma2) - 0.5 / (Md - 1.0);
  return std::clamp(p, 0.0, 1.0);
}

Eigen::VectorXd optimal_eta(const RiskSpec& spec, int M) {
  validate_spec(spec);
  if (M < 2) throw invalid_input("optimal_eta needs M >= 2");
  const double N = static_cast<double>(spec.N);
  const double Md = static_cast<double>(M);
  Eigen::VectorXd eta(spec.beta.size());
  for (Eigen::Index j = 0; j < spec.beta.size(); ++j) {
    const double nb2 = N * spec.beta(j) * spec.beta(j);
    const double e = Md / (Md - 1.0) * nb2 / (nb2 + spec.sigma2) - 0.5 / (Md - 1.0);
    eta(j) = std::clamp(e, 0.0, 1.0);
  }
  return eta;
}

}  // namespace rsa
