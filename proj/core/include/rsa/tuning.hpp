#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsa/rsa.hpp"

namespace rsa {

struct CvGrid {
  std::vector<double> p_values;
  std::vector<int> M_values;
  std::vector<int> L_values;
  int folds = 5;
  std::uint64_t seed = 0;
  FirstRound first_round = FirstRound::mallows;
};

struct FoldSplit {
  std::vector<int> train;
  std::vector<int> validation;
};

// Seeded random partition into near-equal parts; every index lands in
// exactly one validation set. The first N % folds parts get the extra index.
std::vector<FoldSplit> kfold_split(int N, int folds, std::uint64_t seed);

struct CvCell {
  double p = 0.0;
  int M = 0;
  int L = 0;
  double score = 0.0;  // mean validation squared error over folds
  bool ok = true;
  std::string error;
};

struct CvResult {
  CvCell best;                // argmin, ties by smaller p, then M, then L
  std::vector<CvCell> table;  // exhaustive over the grid
};

// Grid search over (p, M, L) by k-fold cross validation against observed y.
// Fold f fits with the grid seed offset by f. Cells where any fold fails are
// recorded but excluded from the argmin.
CvResult cv_grid_search(const Dataset& dataset, const CvGrid& grid, int threads = 1);

// Preset grids: p in [0.01, 0.3] (pre-crisis) or [0.1, 0.3] (post-crisis)
// with increment 0.02, M in [1, 29] step 2, L = 30, 5 folds. Seeds are left
// at zero; callers must set one.
CvGrid paper_precrisis_grid();
CvGrid paper_postcrisis_grid();

}  // namespace rsa
