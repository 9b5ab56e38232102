#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "rsa/errors.hpp"
#include "rsa/rng.hpp"

namespace rsa {

// K-bit inclusion vector realizing a diagonal random selection matrix.
struct SelectionMask {
  std::vector<bool> bits;
  int k = 0;  // number of set bits

  int size() const { return static_cast<int>(bits.size()); }
  std::vector<int> indices() const;
};

// L groups of M masks.
struct MaskEnsemble {
  std::vector<std::vector<SelectionMask>> groups;

  int L() const { return static_cast<int>(groups.size()); }
  int M() const { return groups.empty() ? 0 : static_cast<int>(groups[0].size()); }
};

// Bit j set independently with probability probs[j].
SelectionMask bernoulli_mask(const Eigen::VectorXd& probs, RngStream& rng);

// M*L independent masks in L groups; mask (l, m) draws from the stream
// keyed by (master_seed, l, m), so parallel and serial runs agree exactly.
MaskEnsemble draw_ensemble(const Eigen::VectorXd& probs, int M, int L,
                           std::uint64_t master_seed);

// Exactly P bits set, each P-subset equally likely.
SelectionMask fixed_size_mask(int P, int K, RngStream& rng);

// Prefix masks {1}, {1,2}, ..., {1..min(K, cap)}.
std::vector<SelectionMask> nested_masks(int K, int cap);

// K x P matrix with i.i.d. N(0, 1/P) entries, filled row major.
Eigen::MatrixXd gaussian_projection(int K, int P, RngStream& rng);

}  // namespace rsa
