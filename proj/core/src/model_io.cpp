#include "rsa/model_io.hpp"

#include <fstream>
#include <sstream>

#include "rsa/csv.hpp"

namespace rsa {

namespace {

std::string join_doubles(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += " ";
    out += fmt17(v(i));
  }
  return out;
}

Eigen::VectorXd parse_doubles(const std::string& s, const std::string& key) {
  std::istringstream in(s);
  std::vector<double> vals;
  double v;
  while (in >> v) vals.push_back(v);
  if (!in.eof()) throw invalid_input("model file: bad numeric list for " + key);
  Eigen::VectorXd out(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) out(static_cast<Eigen::Index>(i)) = vals[i];
  return out;
}

}  // namespace

void write_model_file(const std::string& path, const RsaModel& model,
                      const std::vector<std::string>& covariate_names) {
  if (static_cast<Eigen::Index>(covariate_names.size()) != model.beta_agg.size()) {
    throw invalid_input("covariate name count does not match the model");
  }
  std::ofstream out(path);
  if (!out) throw invalid_input("cannot write '" + path + "'");

  Eigen::VectorXd effective_dims(model.outer_weights.w.size());
  for (Eigen::Index l = 0; l < effective_dims.size(); ++l) {
    effective_dims(l) = model.groups[static_cast<std::size_t>(l)].effective_dim;
  }

  out << "rsa-model 1\n";
  out << "seed " << model.config.seed << "\n";
  out << "K " << model.beta_agg.size() << "\n";
  out << "columns ";
  for (std::size_t i = 0; i < covariate_names.size(); ++i) {
    if (i > 0) out << ",";
    out << covariate_names[i];
  }
  out << "\n";
  out << "probs " << join_doubles(model.config.probs) << "\n";
  out << "M " << model.config.M << "\n";
  out << "L " << model.config.L << "\n";
  out << "first_round "
      << (model.config.first_round == FirstRound::mallows ? "mallows" : "uniform")
      << "\n";
  out << "sigma2_mode "
      << (model.config.sigma2_mode == Sigma2Mode::estimate ? "estimate" : "supplied")
      << "\n";
  out << "sigma2 " << fmt17(model.sigma2) << "\n";
  out << "outer_weights " << join_doubles(model.outer_weights.w) << "\n";
  out << "effective_dims " << join_doubles(effective_dims) << "\n";
  out << "beta_agg " << join_doubles(model.beta_agg) << "\n";
}

LoadedModel read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "rsa-model 1") {
    throw invalid_input("'" + path + "' is not a version-1 model file");
  }
  LoadedModel model;
  bool have_beta = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t sp = line.find(' ');
    const std::string key = line.substr(0, sp);
    const std::string rest = sp == std::string::npos ? "" : line.substr(sp + 1);
    if (key == "beta_agg") {
      model.beta_agg = parse_doubles(rest, key);
      have_beta = true;
    } else if (key == "columns") {
      std::string name;
      std::istringstream names(rest);
      while (std::getline(names, name, ',')) model.covariate_names.push_back(name);
    } else if (key == "sigma2") {
      model.sigma2 = parse_doubles(rest, key)(0);
    } else if (key == "seed") {
      model.seed = std::stoull(rest);
    } else if (key == "M") {
      model.M = std::stoi(rest);
    } else if (key == "L") {
      model.L = std::stoi(rest);
    }
    // other keys are informational
  }
  if (!have_beta) throw invalid_input("model file lacks beta_agg");
  if (!model.covariate_names.empty() &&
      static_cast<Eigen::Index>(model.covariate_names.size()) != model.beta_agg.size()) {
    throw invalid_input("model file column names do not match beta_agg length");
  }
  return model;
}

}  // namespace rsa
