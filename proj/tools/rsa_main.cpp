// rsa: fit, predict, tune and benchmark random-subset-averaging regressions.
//
// Exit codes: 0 success, 2 input error (bad files, schemas, dimensions),
// 3 numerical or degeneracy error.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "rsa/baselines.hpp"
#include "rsa/csv.hpp"
#include "rsa/model_io.hpp"
#include "rsa/risk_oracle.hpp"
#include "rsa/rsa.hpp"
#include "rsa/simlab.hpp"
#include "rsa/tuning.hpp"

using nlohmann::json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

// --- JSON schema helpers: every accessor names the offending field path. ---

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rsa::invalid_input("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw rsa::invalid_input(path + ": " + e.what());
  }
  return j;
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw rsa::invalid_input(path + "." + key + ": missing field");
  return j.at(key);
}

int get_int(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_number_integer()) {
    throw rsa::invalid_input(path + "." + key + ": expected an integer");
  }
  return v.get<int>();
}

double get_double(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_number()) throw rsa::invalid_input(path + "." + key + ": expected a number");
  return v.get<double>();
}

std::string get_string(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_string()) throw rsa::invalid_input(path + "." + key + ": expected a string");
  return v.get<std::string>();
}

std::uint64_t get_seed(const json& j, const std::string& path) {
  const json& v = field(j, "seed", path);
  if (!v.is_number_unsigned() && !v.is_number_integer()) {
    throw rsa::invalid_input(path + ".seed: expected an integer seed");
  }
  return v.get<std::uint64_t>();
}

void check_schema_version(const json& j, const std::string& path) {
  if (get_int(j, "schema_version", path) != 1) {
    throw rsa::invalid_input(path + ".schema_version: only version 1 is supported");
  }
}

// --- shared pieces ---

rsa::FirstRound parse_first_round(const std::string& s, const std::string& where) {
  if (s == "mallows") return rsa::FirstRound::mallows;
  if (s == "uniform") return rsa::FirstRound::uniform;
  throw rsa::invalid_input(where + ": first_round must be 'mallows' or 'uniform'");
}

std::vector<std::string> doubles_to_strings(const Eigen::VectorXd& v) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(rsa::fmt17(v(i)));
  return out;
}

// --- fit ---

int cmd_fit(const std::string& data_path, const std::string& y_col,
            const std::string& date_col, double p, int M, int L,
            const std::string& first_round, std::optional<double> sigma2,
            std::uint64_t seed, int threads, const std::string& out_path) {
  const rsa::CsvTable table = rsa::read_csv(data_path);
  const rsa::NumericFrame frame = rsa::parse_numeric_frame(table, y_col, date_col);

  rsa::RsaConfig cfg;
  cfg.probs = Eigen::VectorXd::Constant(1, p);
  cfg.M = M;
  cfg.L = L;
  cfg.first_round = parse_first_round(first_round, "--first-round");
  if (sigma2) {
    cfg.sigma2_mode = rsa::Sigma2Mode::supplied;
    cfg.sigma2_value = *sigma2;
  }
  cfg.seed = seed;
  const rsa::RsaModel model = rsa::fit_rsa(frame.data, cfg, threads);
  rsa::write_model_file(out_path, model, frame.covariate_names);

  std::cout << "fit: N=" << frame.data.rows() << " K=" << frame.data.cols()
            << " p=" << rsa::fmt17(p) << " M=" << M << " L=" << L
            << " sigma2=" << rsa::fmt17(model.sigma2) << "\n";
  std::cout << "effective_dims";
  for (const auto& g : model.groups) std::cout << " " << rsa::fmt17(g.effective_dim);
  std::cout << "\n";
  std::cout << "model written to " << out_path << "\n";
  return 0;
}

// --- predict ---

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const std::string& out_path) {
  const rsa::LoadedModel model = rsa::read_model_file(model_path);
  const rsa::CsvTable table = rsa::read_csv(data_path);

  // Select the model's covariate columns by name; extra columns (response,
  // dates) are ignored so the training file round-trips.
  std::vector<int> col_idx;
  if (!model.covariate_names.empty()) {
    for (const std::string& name : model.covariate_names) {
      const int idx = table.column_index(name);
      if (idx < 0) throw rsa::invalid_input("missing covariate column '" + name + "'");
      col_idx.push_back(idx);
    }
  } else {
    if (static_cast<Eigen::Index>(table.header.size()) != model.beta_agg.size()) {
      throw rsa::invalid_input("column count does not match the model");
    }
    for (std::size_t j = 0; j < table.header.size(); ++j) {
      col_idx.push_back(static_cast<int>(j));
    }
  }

  std::vector<std::vector<std::string>> rows;
  rows.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    double pred = 0.0;
    for (std::size_t c = 0; c < col_idx.size(); ++c) {
      const std::string& cell = table.rows[r][static_cast<std::size_t>(col_idx[c])];
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end != cell.c_str() + cell.size()) {
        throw rsa::invalid_input("row " + std::to_string(r + 2) + ", column " +
                                 table.header[static_cast<std::size_t>(col_idx[c])] +
                                 ": cannot parse '" + cell + "'");
      }
      pred += v * model.beta_agg(static_cast<Eigen::Index>(c));
    }
    rows.push_back({rsa::fmt17(pred)});
  }
  rsa::write_csv(out_path, {"prediction"}, rows);
  std::cout << rows.size() << " predictions written to " << out_path << "\n";
  return 0;
}

// --- simulate ---

json simulate_preset(const std::string& name) {
  if (name == "smoke") {
    return json{{"schema_version", 1},
                {"seed", 1},
                {"reps", 1},
                {"dgp",
                 {{"N", 30},
                  {"K", 6},
                  {"K_star", 3},
                  {"decay", "poly"},
                  {"placement", "ordered"},
                  {"cov", "ar1"},
                  {"rho", 0.1},
                  {"snr", 0.7}}},
                {"methods",
                 {{{"name", "RSA"}, {"type", "rsa"}, {"p", 0.3}, {"M", 4}, {"L", 3}},
                  {{"name", "OLS"}, {"type", "ols"}}}}};
  }
  if (name == "table4-ordering") {
    return json{
        {"schema_version", 1},
        {"seed", 20240101},
        {"reps", 50},
        {"dgp",
         {{"N", 300},
          {"K", 200},
          {"K_star", 60},
          {"decay", "poly"},
          {"placement", "random"},
          {"cov", "ar1"},
          {"rho", 0.9},
          {"snr", 0.7}}},
        {"methods",
         {{{"name", "RSA"}, {"type", "rsa"}, {"p", 0.1}, {"M", 30}, {"L", 30}},
          {{"name", "MMA"}, {"type", "mma"}},
          {{"name", "naive"}, {"type", "naive"}, {"p", 0.1}, {"M", 30}, {"L", 30}}}},
        {"assert_ordering",
         json::array({json::array({"RSA", "MMA"}), json::array({"RSA", "naive"})})}};
  }
  throw rsa::invalid_input("unknown preset '" + name + "'");
}

rsa::DgpConfig parse_dgp(const json& j, std::uint64_t seed) {
  rsa::DgpConfig dgp;
  dgp.N = get_int(j, "N", "dgp");
  dgp.K = get_int(j, "K", "dgp");
  dgp.K_star = get_int(j, "K_star", "dgp");
  const std::string decay = get_string(j, "decay", "dgp");
  if (decay == "poly") {
    dgp.decay = rsa::Decay::poly;
    dgp.decay_alpha = 0.51;
  } else if (decay == "exp") {
    dgp.decay = rsa::Decay::exponential;
    dgp.decay_alpha = 0.25;
  } else {
    throw rsa::invalid_input("dgp.decay: expected 'poly' or 'exp'");
  }
  if (j.contains("decay_alpha")) dgp.decay_alpha = get_double(j, "decay_alpha", "dgp");
  const std::string placement = get_string(j, "placement", "dgp");
  if (placement == "ordered") {
    dgp.placement = rsa::Placement::ordered;
  } else if (placement == "random") {
    dgp.placement = rsa::Placement::random;
  } else {
    throw rsa::invalid_input("dgp.placement: expected 'ordered' or 'random'");
  }
  const std::string cov = get_string(j, "cov", "dgp");
  if (cov == "ar1") {
    dgp.cov = rsa::CovKind::ar1;
    dgp.rho = get_double(j, "rho", "dgp");
  } else if (cov == "random") {
    dgp.cov = rsa::CovKind::random;
  } else if (cov == "orthogonal") {
    dgp.cov = rsa::CovKind::orthogonal;
  } else {
    throw rsa::invalid_input("dgp.cov: expected 'ar1', 'random' or 'orthogonal'");
  }
  if (j.contains("sigma2")) {
    dgp.explicit_sigma2 = true;
    dgp.sigma2 = get_double(j, "sigma2", "dgp");
  } else {
    dgp.snr = get_double(j, "snr", "dgp");
  }
  dgp.seed = seed;
  return dgp;
}

rsa::Method parse_method(const json& j, std::size_t index) {
  const std::string path = "methods[" + std::to_string(index) + "]";
  const std::string type = get_string(j, "type", path);
  const std::string name = j.contains("name") ? get_string(j, "name", path) : type;
  if (type == "rsa") {
    rsa::RsaConfig cfg;
    cfg.probs = Eigen::VectorXd::Constant(1, get_double(j, "p", path));
    cfg.M = get_int(j, "M", path);
    cfg.L = get_int(j, "L", path);
    if (j.contains("first_round")) {
      cfg.first_round = parse_first_round(get_string(j, "first_round", path), path);
    }
    if (j.contains("sigma2")) {
      cfg.sigma2_mode = rsa::Sigma2Mode::supplied;
      cfg.sigma2_value = get_double(j, "sigma2", path);
    }
    return rsa::make_rsa_method(name, cfg);
  }
  if (type == "rsr") {
    const int B = j.contains("B") ? get_int(j, "B", path) : 500;
    return rsa::make_rsr_method(name, get_int(j, "P", path), B);
  }
  if (type == "mma") return rsa::make_mma_method(name);
  if (type == "rpr") {
    const int B = j.contains("B") ? get_int(j, "B", path) : 500;
    return rsa::make_rpr_method(name, get_int(j, "P", path), B);
  }
  if (type == "naive") {
    return rsa::make_naive_method(
        name, Eigen::VectorXd::Constant(1, get_double(j, "p", path)),
        get_int(j, "M", path), get_int(j, "L", path));
  }
  if (type == "ols") return rsa::make_ols_method(name);
  throw rsa::invalid_input(path + ".type: unknown method type '" + type + "'");
}

int cmd_simulate(const std::string& config_path, const std::string& preset,
                 std::optional<int> reps_override, std::optional<std::uint64_t> seed_override,
                 int threads, const std::string& out_dir) {
  json cfg;
  if (!preset.empty()) {
    cfg = simulate_preset(preset);
  } else if (!config_path.empty()) {
    cfg = load_json(config_path);
  } else {
    throw rsa::invalid_input("simulate needs --config or --preset");
  }
  check_schema_version(cfg, "experiment");
  if (seed_override) cfg["seed"] = *seed_override;
  if (reps_override) cfg["reps"] = *reps_override;

  const std::uint64_t seed = get_seed(cfg, "experiment");
  const int reps = get_int(cfg, "reps", "experiment");
  const rsa::DgpConfig dgp = parse_dgp(field(cfg, "dgp", "experiment"), seed);

  const json& jmethods = field(cfg, "methods", "experiment");
  if (!jmethods.is_array() || jmethods.empty()) {
    throw rsa::invalid_input("experiment.methods: expected a non-empty array");
  }
  std::vector<rsa::Method> methods;
  for (std::size_t i = 0; i < jmethods.size(); ++i) {
    methods.push_back(parse_method(jmethods[i], i));
  }

  const auto results = rsa::run_experiment(dgp, methods, reps, seed, threads);

  const std::vector<std::string> comments = {"config " + cfg.dump(),
                                             "seed " + std::to_string(seed)};
  std::vector<std::vector<std::string>> summary_rows;
  std::vector<std::vector<std::string>> rep_rows;
  for (const auto& res : results) {
    summary_rows.push_back({res.method, "msfe", rsa::fmt17(res.msfe_mean),
                            rsa::fmt17(res.msfe_sd), std::to_string(res.reps),
                            res.ok ? "ok" : "failed"});
    summary_rows.push_back({res.method, "mse", rsa::fmt17(res.mse_mean),
                            rsa::fmt17(res.mse_sd), std::to_string(res.reps),
                            res.ok ? "ok" : "failed"});
    for (int r = 0; r < res.reps; ++r) {
      rep_rows.push_back({res.method, "msfe", std::to_string(r),
                          rsa::fmt17(res.msfe[static_cast<std::size_t>(r)])});
      rep_rows.push_back({res.method, "mse", std::to_string(r),
                          rsa::fmt17(res.mse[static_cast<std::size_t>(r)])});
    }
  }
  rsa::write_csv(out_dir + "/results.csv", {"method", "metric", "mean", "sd", "reps", "status"},
                 summary_rows, comments);
  rsa::write_csv(out_dir + "/per_rep.csv", {"method", "metric", "rep", "value"}, rep_rows,
                 comments);

  for (const auto& res : results) {
    std::cout << "method=" << res.method << " msfe_mean=" << rsa::fmt17(res.msfe_mean)
              << " msfe_sd=" << rsa::fmt17(res.msfe_sd)
              << " mse_mean=" << rsa::fmt17(res.mse_mean)
              << " mse_sd=" << rsa::fmt17(res.mse_sd)
              << (res.ok ? "" : " FAILED: " + res.error) << "\n";
  }

  bool orderings_ok = true;
  if (cfg.contains("assert_ordering")) {
    const json& orderings = cfg.at("assert_ordering");
    if (!orderings.is_array()) {
      throw rsa::invalid_input("experiment.assert_ordering: expected an array of pairs");
    }
    for (const auto& pair : orderings) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
          !pair[1].is_string()) {
        throw rsa::invalid_input(
            "experiment.assert_ordering: each entry must be [method_a, method_b]");
      }
      const std::string a = pair.at(0).get<std::string>();
      const std::string b = pair.at(1).get<std::string>();
      const auto find = [&](const std::string& name) -> const rsa::ExperimentResult& {
        for (const auto& res : results) {
          if (res.method == name) return res;
        }
        throw rsa::invalid_input("assert_ordering references unknown method '" + name + "'");
      };
      const auto& ra = find(a);
      const auto& rb = find(b);
      const bool ok = ra.ok && rb.ok && ra.msfe_mean < rb.msfe_mean;
      orderings_ok = orderings_ok && ok;
      std::cout << "ordering " << a << "<" << b << ": " << (ok ? "PASS" : "FAIL") << "\n";
    }
  }
  std::cout << "results written to " << out_dir << "/results.csv\n";
  return orderings_ok ? 0 : kExitNumeric;
}

// --- risk ---

int cmd_risk(const std::string& spec_path) {
  const json j = load_json(spec_path);
  check_schema_version(j, "spec");
  const json& jbeta = field(j, "beta", "spec");
  if (!jbeta.is_array() || jbeta.empty()) {
    throw rsa::invalid_input("spec.beta: expected a non-empty array of numbers");
  }
  rsa::RiskSpec spec;
  spec.beta.resize(static_cast<Eigen::Index>(jbeta.size()));
  for (std::size_t i = 0; i < jbeta.size(); ++i) {
    if (!jbeta[i].is_number()) {
      throw rsa::invalid_input("spec.beta[" + std::to_string(i) + "]: expected a number");
    }
    spec.beta(static_cast<Eigen::Index>(i)) = jbeta[i].get<double>();
  }
  spec.sigma2 = get_double(j, "sigma2", "spec");
  spec.N = get_int(j, "N", "spec");
  const int M = get_int(j, "M", "spec");

  const double fixed = rsa::rsa_risk_fixed_p(spec);
  const double varying = rsa::rsa_risk_varying_p(spec);
  const double Popt = rsa::optimal_P(spec);
  const double rsr = rsa::rsr_risk(spec, Popt);

  // |beta| must be non-increasing for the MA formula; sort a copy.
  rsa::RiskSpec sorted = spec;
  std::sort(sorted.beta.data(), sorted.beta.data() + sorted.beta.size(),
            [](double a, double b) { return std::abs(a) > std::abs(b); });
  const double ma = rsa::ma_risk(sorted);

  std::cout << "risk report (K=" << spec.beta.size() << ", N=" << spec.N
            << ", sigma2=" << rsa::fmt17(spec.sigma2) << ", M=" << M << ")\n";
  std::cout << "rsa_risk_fixed_p " << rsa::fmt17(fixed) << "\n";
  std::cout << "rsa_risk_varying_p " << rsa::fmt17(varying) << "\n";
  std::cout << "ma_risk " << rsa::fmt17(ma) << "\n";
  std::cout << "rsr_risk_at_optimal_P " << rsa::fmt17(rsr) << "\n";
  std::cout << "rpr_risk_at_optimal_P " << rsa::fmt17(rsr) << "\n";
  std::cout << "optimal_P " << rsa::fmt17(Popt) << "\n";
  std::cout << "optimal_p_fixed " << rsa::fmt17(rsa::optimal_p_fixed(spec, M)) << "\n";
  const Eigen::VectorXd eta = rsa::optimal_eta(spec, M);
  std::cout << "optimal_eta";
  for (Eigen::Index i = 0; i < eta.size(); ++i) std::cout << " " << rsa::fmt17(eta(i));
  std::cout << "\n";
  std::cout << "jensen_ordering_ok "
            << ((varying <= fixed + 1e-12 * (1.0 + fixed)) ? "true" : "false") << "\n";
  return 0;
}

// --- cv ---

rsa::CvGrid cv_preset(const std::string& name) {
  if (name == "paper-precrisis") return rsa::paper_precrisis_grid();
  if (name == "paper-postcrisis") return rsa::paper_postcrisis_grid();
  throw rsa::invalid_input("unknown preset '" + name + "'");
}

rsa::CvGrid parse_grid(const json& j) {
  check_schema_version(j, "grid");
  rsa::CvGrid grid;
  grid.seed = get_seed(j, "grid");
  grid.folds = j.contains("folds") ? get_int(j, "folds", "grid") : 5;
  const auto read_axis = [&](const char* key, auto& out) {
    const json& axis = field(j, key, "grid");
    if (!axis.is_array() || axis.empty()) {
      throw rsa::invalid_input(std::string("grid.") + key + ": expected a non-empty array");
    }
    for (const auto& v : axis) {
      if (!v.is_number()) {
        throw rsa::invalid_input(std::string("grid.") + key + ": expected numbers");
      }
      out.push_back(v.get<typename std::decay_t<decltype(out)>::value_type>());
    }
  };
  read_axis("p_values", grid.p_values);
  read_axis("M_values", grid.M_values);
  read_axis("L_values", grid.L_values);
  if (j.contains("first_round")) {
    grid.first_round = parse_first_round(get_string(j, "first_round", "grid"), "grid");
  }
  return grid;
}

int cmd_cv(const std::string& data_path, const std::string& y_col,
           const std::string& date_col, const std::string& grid_path,
           const std::string& preset, std::optional<std::uint64_t> seed_override,
           int threads, const std::string& out_table) {
  const rsa::CsvTable table = rsa::read_csv(data_path);
  const rsa::NumericFrame frame = rsa::parse_numeric_frame(table, y_col, date_col);

  rsa::CvGrid grid;
  if (!preset.empty()) {
    grid = cv_preset(preset);
    if (!seed_override) {
      throw rsa::invalid_input("--seed is required with --preset (seeds are mandatory)");
    }
  } else if (!grid_path.empty()) {
    grid = parse_grid(load_json(grid_path));
  } else {
    throw rsa::invalid_input("cv needs --grid or --preset");
  }
  if (seed_override) grid.seed = *seed_override;

  const rsa::CvResult result = rsa::cv_grid_search(frame.data, grid, threads);

  std::vector<std::vector<std::string>> rows;
  for (const auto& cell : result.table) {
    rows.push_back({rsa::fmt17(cell.p), std::to_string(cell.M), std::to_string(cell.L),
                    cell.ok ? rsa::fmt17(cell.score) : "", cell.ok ? "ok" : "failed"});
  }
  rsa::write_csv(out_table, {"p", "M", "L", "mean_cv_error", "status"}, rows,
                 {"seed " + std::to_string(grid.seed),
                  "folds " + std::to_string(grid.folds)});

  std::cout << "best p=" << rsa::fmt17(result.best.p) << " M=" << result.best.M
            << " L=" << result.best.L
            << " mean_cv_error=" << rsa::fmt17(result.best.score) << "\n";
  std::cout << "heatmap table written to " << out_table << "\n";
  return 0;
}

// --- rolling ---

std::vector<int> parse_horizons(const std::string& text) {
  std::vector<int> horizons;
  const auto colon = text.find(':');
  try {
    if (colon != std::string::npos) {
      const int lo = std::stoi(text.substr(0, colon));
      const int hi = std::stoi(text.substr(colon + 1));
      for (int h = lo; h <= hi; ++h) horizons.push_back(h);
    } else {
      std::size_t pos = 0;
      while (pos < text.size()) {
        const auto comma = text.find(',', pos);
        const std::string tok =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        horizons.push_back(std::stoi(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    }
  } catch (const std::exception&) {
    throw rsa::invalid_input("--horizons: expected 'lo:hi' or a comma list");
  }
  if (horizons.empty()) throw rsa::invalid_input("--horizons: empty");
  return horizons;
}

int cmd_rolling(const std::string& data_path, const std::string& y_col,
                const std::string& date_col, int window, const std::string& horizons_text,
                const std::string& method_name, double p, int M, int L, int P, int B,
                std::uint64_t seed, int threads, const std::string& out_path) {
  const rsa::CsvTable table = rsa::read_csv(data_path);
  const rsa::NumericFrame frame = rsa::parse_numeric_frame(table, y_col, date_col);
  const std::vector<int> horizons = parse_horizons(horizons_text);

  rsa::Method method;
  if (method_name == "rsa") {
    rsa::RsaConfig cfg;
    cfg.probs = Eigen::VectorXd::Constant(1, p);
    cfg.M = M;
    cfg.L = L;
    method = rsa::make_rsa_method("rsa", cfg);
  } else if (method_name == "rsr") {
    method = rsa::make_rsr_method("rsr", P, B);
  } else if (method_name == "rpr") {
    method = rsa::make_rpr_method("rpr", P, B);
  } else if (method_name == "mma") {
    method = rsa::make_mma_method("mma");
  } else if (method_name == "naive") {
    method = rsa::make_naive_method("naive", Eigen::VectorXd::Constant(1, p), M, L);
  } else if (method_name == "ols") {
    method = rsa::make_ols_method("ols");
  } else {
    throw rsa::invalid_input("--method: unknown method '" + method_name + "'");
  }

  std::cout << "rolling forecast: window=" << window << " horizons="
            << horizons.front() << ".." << horizons.back() << " method=" << method_name
            << "\n";

  const auto results =
      rsa::rolling_forecast(frame.data, window, horizons, method, seed, threads);

  std::vector<std::vector<std::string>> rows;
  for (const auto& row : results) {
    rows.push_back({std::to_string(row.horizon), rsa::fmt17(row.msfe_mean),
                    rsa::fmt17(row.msfe_sd), std::to_string(row.n_forecasts)});
  }
  rsa::write_csv(out_path, {"horizon", "msfe_mean", "msfe_sd", "n_forecasts"}, rows,
                 {"method " + method_name, "window " + std::to_string(window),
                  "seed " + std::to_string(seed)});
  std::cout << "per-horizon MSFE written to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random subset averaging for linear prediction"};
  app.require_subcommand(1);

  // fit
  auto* fit = app.add_subcommand("fit", "Fit an RSA model on a CSV sample");
  std::string fit_data, fit_y = "y", fit_date, fit_first = "mallows", fit_out = "model.txt";
  double fit_p = 0.1;
  int fit_M = 30, fit_L = 30, fit_threads = 1;
  double fit_sigma2_val = 0.0;
  std::uint64_t fit_seed = 0;
  fit->add_option("--data", fit_data, "training CSV")->required();
  fit->add_option("--y-col", fit_y, "response column name");
  fit->add_option("--date-col", fit_date, "date column to ignore");
  fit->add_option("--p", fit_p, "selection probability")->check(CLI::Range(0.0, 1.0));
  fit->add_option("--M", fit_M, "candidates per group")->check(CLI::PositiveNumber);
  fit->add_option("--L", fit_L, "groups")->check(CLI::PositiveNumber);
  fit->add_option("--first-round", fit_first, "mallows|uniform");
  auto* fit_s2 = fit->add_option("--sigma2", fit_sigma2_val, "supply sigma^2 instead of estimating");
  fit->add_option("--seed", fit_seed, "rng seed")->required();
  fit->add_option("--threads", fit_threads, "worker bound");
  fit->add_option("--out", fit_out, "model file path");

  // predict
  auto* predict = app.add_subcommand("predict", "Predict with a fitted model file");
  std::string pred_model, pred_data, pred_out = "predictions.csv";
  predict->add_option("--model", pred_model, "model file")->required();
  predict->add_option("--data", pred_data, "covariate CSV")->required();
  predict->add_option("--out", pred_out, "output CSV");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo experiment");
  std::string sim_config, sim_preset, sim_out_dir = ".";
  int sim_threads = 1;
  int sim_reps_val = 0;
  std::uint64_t sim_seed_val = 0;
  simulate->add_option("--config", sim_config, "experiment JSON");
  simulate->add_option("--preset", sim_preset, "smoke|table4-ordering");
  auto* sim_reps = simulate->add_option("--reps", sim_reps_val, "override replication count");
  auto* sim_seed = simulate->add_option("--seed", sim_seed_val, "override seed");
  simulate->add_option("--threads", sim_threads, "worker bound");
  simulate->add_option("--out-dir", sim_out_dir, "output directory");

  // risk
  auto* risk = app.add_subcommand("risk", "Closed-form risk report for a spec");
  std::string risk_spec;
  risk->add_option("--spec", risk_spec, "spec JSON with beta, sigma2, N, M")->required();

  // cv
  auto* cv = app.add_subcommand("cv", "Cross-validated (p, M, L) grid search");
  std::string cv_data, cv_y = "y", cv_date, cv_grid, cv_preset_name, cv_out = "heatmap.csv";
  int cv_threads = 1;
  std::uint64_t cv_seed_val = 0;
  cv->add_option("--data", cv_data, "training CSV")->required();
  cv->add_option("--y-col", cv_y, "response column name");
  cv->add_option("--date-col", cv_date, "date column to ignore");
  cv->add_option("--grid", cv_grid, "grid JSON");
  cv->add_option("--preset", cv_preset_name, "paper-precrisis|paper-postcrisis");
  auto* cv_seed = cv->add_option("--seed", cv_seed_val, "seed (required with --preset)");
  cv->add_option("--threads", cv_threads, "worker bound");
  cv->add_option("--out-table", cv_out, "heatmap CSV path");

  // rolling
  auto* rolling = app.add_subcommand("rolling", "Rolling-window forecasting");
  std::string roll_data, roll_y = "y", roll_date, roll_horizons = "1:22",
              roll_method = "rsa", roll_out = "rolling_msfe.csv";
  int roll_window = 252, roll_M = 30, roll_L = 30, roll_P = 1, roll_B = 500,
      roll_threads = 1;
  double roll_p = 0.1;
  std::uint64_t roll_seed = 0;
  rolling->add_option("--data", roll_data, "time-ordered CSV")->required();
  rolling->add_option("--y-col", roll_y, "response column name");
  rolling->add_option("--date-col", roll_date, "date column");
  rolling->add_option("--window", roll_window, "estimation window length");
  rolling->add_option("--horizons", roll_horizons, "e.g. 1:22 or 1,5,22");
  rolling->add_option("--method", roll_method, "rsa|rsr|rpr|mma|naive|ols");
  rolling->add_option("--p", roll_p, "selection probability (rsa, naive)");
  rolling->add_option("--M", roll_M, "candidates per group (rsa, naive)");
  rolling->add_option("--L", roll_L, "groups (rsa, naive)");
  rolling->add_option("--P", roll_P, "subset/projection size (rsr, rpr)");
  rolling->add_option("--B", roll_B, "draw count (rsr, rpr)");
  rolling->add_option("--seed", roll_seed, "rng seed")->required();
  rolling->add_option("--threads", roll_threads, "worker bound");
  rolling->add_option("--out", roll_out, "per-horizon MSFE CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (fit->parsed()) {
      std::optional<double> s2;
      if (fit_s2->count() > 0) s2 = fit_sigma2_val;
      return cmd_fit(fit_data, fit_y, fit_date, fit_p, fit_M, fit_L, fit_first, s2,
                     fit_seed, fit_threads, fit_out);
    }
    if (predict->parsed()) return cmd_predict(pred_model, pred_data, pred_out);
    if (simulate->parsed()) {
      std::optional<int> reps;
      if (sim_reps->count() > 0) reps = sim_reps_val;
      std::optional<std::uint64_t> seed;
      if (sim_seed->count() > 0) seed = sim_seed_val;
      return cmd_simulate(sim_config, sim_preset, reps, seed, sim_threads, sim_out_dir);
    }
    if (risk->parsed()) return cmd_risk(risk_spec);
    if (cv->parsed()) {
      std::optional<std::uint64_t> seed;
      if (cv_seed->count() > 0) seed = cv_seed_val;
      return cmd_cv(cv_data, cv_y, cv_date, cv_grid, cv_preset_name, seed, cv_threads,
                    cv_out);
    }
    if (rolling->parsed()) {
      return cmd_rolling(roll_data, roll_y, roll_date, roll_window, roll_horizons,
                         roll_method, roll_p, roll_M, roll_L, roll_P, roll_B, roll_seed,
                         roll_threads, roll_out);
    }
  } catch (const rsa::invalid_input& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const rsa::degenerate_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
