#include "rsa/subsets.hpp"

#include <cmath>
#include <numeric>

namespace rsa {

std::vector<int> SelectionMask::indices() const {
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(k));
  for (int j = 0; j < size(); ++j) {
    if (bits[static_cast<std::size_t>(j)]) idx.push_back(j);
  }
  return idx;
}

SelectionMask bernoulli_mask(const Eigen::VectorXd& probs, RngStream& rng) {
  const int K = static_cast<int>(probs.size());
  for (int j = 0; j < K; ++j) {
    if (!(probs(j) >= 0.0 && probs(j) <= 1.0)) {
      throw invalid_input("selection probability outside [0, 1]");
    }
  }
  SelectionMask mask;
  mask.bits.resize(static_cast<std::size_t>(K));
  for (int j = 0; j < K; ++j) {
    const bool on = rng.next_double() < probs(j);
    mask.bits[static_cast<std::size_t>(j)] = on;
    mask.k += on ? 1 : 0;
  }
  return mask;
}

MaskEnsemble draw_ensemble(const Eigen::VectorXd& probs, int M, int L,
                           std::uint64_t master_seed) {
  if (M < 1 || L < 1) throw invalid_input("M and L must be at least 1");
  MaskEnsemble ensemble;
  ensemble.groups.resize(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    auto& group = ensemble.groups[static_cast<std::size_t>(l)];
    group.reserve(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) {
      RngStream rng(master_seed, static_cast<std::uint64_t>(l),
                    static_cast<std::uint64_t>(m));
      group.push_back(bernoulli_mask(probs, rng));
    }
  }
  return ensemble;
}

SelectionMask fixed_size_mask(int P, int K, RngStream& rng) {
  if (P < 1 || P > K) throw invalid_input("fixed subset size must satisfy 1 <= P <= K");
  // Partial Fisher-Yates: the first P entries of a shuffled index array.
  std::vector<int> idx(static_cast<std::size_t>(K));
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < P; ++i) {
    const int j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(K - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  SelectionMask mask;
  mask.bits.assign(static_cast<std::size_t>(K), false);
  for (int i = 0; i < P; ++i) mask.bits[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] = true;
  mask.k = P;
  return mask;
}

std::vector<SelectionMask> nested_masks(int K, int cap) {
  if (K < 1) throw invalid_input("K must be at least 1");
  if (cap < 1) throw invalid_input("cap must be at least 1");
  const int depth = std::min(K, cap);
  std::vector<SelectionMask> masks;
  masks.reserve(static_cast<std::size_t>(depth));
  for (int d = 1; d <= depth; ++d) {
    SelectionMask mask;
    mask.bits.assign(static_cast<std::size_t>(K), false);
    for (int j = 0; j < d; ++j) mask.bits[static_cast<std::size_t>(j)] = true;
    mask.k = d;
    masks.push_back(std::move(mask));
  }
  return masks;
}

Eigen::MatrixXd gaussian_projection(int K, int P, RngStream& rng) {
  if (K < 1) throw invalid_input("K must be at least 1");
  if (P < 1) throw invalid_input("P must be at least 1");
  const double scale = 1.0 / std::sqrt(static_cast<double>(P));
  Eigen::MatrixXd R(K, P);
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < P; ++j) {
      R(i, j) = scale * rng.next_gaussian();
    }
  }
  return R;
}

}  // namespace rsa
