#include "rsa/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rsa/parallel.hpp"

namespace rsa {

std::vector<FoldSplit> kfold_split(int N, int folds, std::uint64_t seed) {
  if (folds < 2) throw invalid_input("folds must be at least 2");
  if (folds > N) throw invalid_input("folds must not exceed N");

  std::vector<int> perm(static_cast<std::size_t>(N));
  std::iota(perm.begin(), perm.end(), 0);
  RngStream rng(seed, stream_tag::kKfold, 0);
  for (int i = N - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i + 1)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }

  const int base = N / folds;
  const int extra = N % folds;
  std::vector<FoldSplit> splits(static_cast<std::size_t>(folds));
  int pos = 0;
  for (int f = 0; f < folds; ++f) {
    const int size = base + (f < extra ? 1 : 0);
    auto& split = splits[static_cast<std::size_t>(f)];
    split.validation.assign(perm.begin() + pos, perm.begin() + pos + size);
    std::sort(split.validation.begin(), split.validation.end());
    pos += size;
  }
  for (int f = 0; f < folds; ++f) {
    auto& split = splits[static_cast<std::size_t>(f)];
    split.train.reserve(static_cast<std::size_t>(N) - split.validation.size());
    std::size_t vi = 0;
    for (int i = 0; i < N; ++i) {
      if (vi < split.validation.size() && split.validation[vi] == i) {
        ++vi;
      } else {
        split.train.push_back(i);
      }
    }
  }
  return splits;
}

namespace {

Dataset subset_rows(const Dataset& data, const std::vector<int>& rows) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.size()), data.cols());
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    X.row(static_cast<Eigen::Index>(i)) = data.X.row(rows[i]);
    y(static_cast<Eigen::Index>(i)) = data.y(rows[i]);
  }
  return Dataset{std::move(X), std::move(y)};
}

}  // namespace

namespace {

CvGrid paper_grid(double p_from) {
  CvGrid grid;
  grid.folds = 5;
  grid.L_values = {30};
  for (int m = 1; m <= 29; m += 2) grid.M_values.push_back(m);
  for (int i = 0;; ++i) {
    const double p = p_from + 0.02 * i;
    if (p > 0.3 + 1e-12) break;
    grid.p_values.push_back(p);
  }
  return grid;
}

}  // namespace

CvGrid paper_precrisis_grid() { return paper_grid(0.01); }

CvGrid paper_postcrisis_grid() { return paper_grid(0.10); }

CvResult cv_grid_search(const Dataset& dataset, const CvGrid& grid, int threads) {
  if (grid.p_values.empty() || grid.M_values.empty() || grid.L_values.empty()) {
    throw invalid_input("grid axes must be non-empty");
  }
  for (double p : grid.p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw invalid_input("grid p values must lie in [0, 1]");
  }
  for (int M : grid.M_values) {
    if (M < 1) throw invalid_input("grid M values must be at least 1");
  }
  for (int L : grid.L_values) {
    if (L < 1) throw invalid_input("grid L values must be at least 1");
  }

  const std::vector<FoldSplit> splits =
      kfold_split(static_cast<int>(dataset.rows()), grid.folds, grid.seed);

  std::vector<CvCell> table;
  for (double p : grid.p_values) {
    for (int M : grid.M_values) {
      for (int L : grid.L_values) {
        table.push_back(CvCell{p, M, L, 0.0, true, ""});
      }
    }
  }

  parallel_for(table.size(), threads, [&](std::size_t c) {
    CvCell& cell = table[c];
    double total = 0.0;
    for (std::size_t f = 0; f < splits.size(); ++f) {
      try {
        const Dataset train = subset_rows(dataset, splits[f].train);
        RsaConfig cfg;
        cfg.probs = Eigen::VectorXd::Constant(1, cell.p);
        cfg.M = cell.M;
        cfg.L = cell.L;
        cfg.first_round = grid.first_round;
        cfg.seed = grid.seed + static_cast<std::uint64_t>(f);
        const RsaModel model = fit_rsa(train, cfg);
        double fold_err = 0.0;
        for (int row : splits[f].validation) {
          const double pred = dataset.X.row(row).dot(model.beta_agg);
          const double err = pred - dataset.y(row);
          fold_err += err * err;
        }
        total += fold_err / static_cast<double>(splits[f].validation.size());
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
        break;
      }
    }
    if (cell.ok) cell.score = total / static_cast<double>(splits.size());
  });

  CvResult result;
  result.table = table;
  bool found = false;
  for (const CvCell& cell : table) {
    if (!cell.ok) continue;
    if (!found) {
      result.best = cell;
      found = true;
      continue;
    }
    const auto key = [](const CvCell& c) {
      return std::make_tuple(c.score, c.p, c.M, c.L);
    };
    if (key(cell) < key(result.best)) result.best = cell;
  }
  if (!found) throw degenerate_error("every grid cell failed");
  return result;
}

}  // namespace rsa
