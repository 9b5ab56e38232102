#pragma once

#include <string>
#include <vector>

#include "rsa/rsa.hpp"

namespace rsa {

// Model files are line-oriented text: `key value...` pairs with numbers at
// 17 significant digits, so identical fits serialize byte-identically.
void write_model_file(const std::string& path, const RsaModel& model,
                      const std::vector<std::string>& covariate_names);

struct LoadedModel {
  Eigen::VectorXd beta_agg;
  std::vector<std::string> covariate_names;
  double sigma2 = 0.0;
  std::uint64_t seed = 0;
  int M = 0, L = 0;
};

LoadedModel read_model_file(const std::string& path);

}  // namespace rsa
