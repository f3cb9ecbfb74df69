#pragma once

#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "betalog/experiment.hpp"

namespace betalog {

inline nlohmann::json to_json(const EnsembleSpec& s) {
  nlohmann::json j;
  j["kind"] = to_string(s.kind);
  j["beta"] = s.beta;
  switch (s.kind) {
    case EnsembleKind::Laguerre: j["alpha"] = s.alpha; break;
    case EnsembleKind::Jacobi:
      j["mu"] = s.mu;
      j["nu"] = s.nu;
      break;
    case EnsembleKind::GeneralPotential: j["potential"] = s.potential.coefficients; break;
    default: break;
  }
  return j;
}

inline EnsembleSpec ensemble_from_json(const nlohmann::json& j) {
  EnsembleSpec s;
  s.kind = ensemble_kind_from_string(j.at("kind").get<std::string>());
  s.beta = j.at("beta").get<double>();
  if (j.contains("alpha")) s.alpha = j["alpha"].get<double>();
  if (j.contains("mu")) s.mu = j["mu"].get<double>();
  if (j.contains("nu")) s.nu = j["nu"].get<double>();
  if (j.contains("potential"))
    s.potential.coefficients = j["potential"].get<std::vector<double>>();
  s.validate();
  return s;
}

inline nlohmann::json to_json(const McmcParams& p) {
  return {{"burn_in", p.burn_in},
          {"thinning", p.thinning},
          {"step_scale", p.step_scale},
          {"target_acceptance", p.target_acceptance}};
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["experiment"] = to_string(c.experiment);
  j["ensemble"] = to_json(c.ensemble);
  j["n_grid"] = c.n_grid;
  j["replicas"] = c.replicas;
  j["seed"] = c.seed;
  j["mcmc"] = to_json(c.mcmc);
  j["use_mcmc"] = c.use_mcmc;
  j["output_dir"] = c.output_dir;
  j["grid_points"] = c.grid_points;
  j["box_halfwidth"] = c.box_halfwidth;
  j["tol"] = c.tol;
  j["workers"] = c.workers;
  return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.experiment = experiment_kind_from_string(j.at("experiment").get<std::string>());
  c.ensemble = ensemble_from_json(j.at("ensemble"));
  if (j.contains("n_grid")) c.n_grid = j["n_grid"].get<std::vector<std::int64_t>>();
  if (j.contains("replicas")) c.replicas = j["replicas"].get<std::int64_t>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("mcmc")) {
    const auto& m = j["mcmc"];
    if (m.contains("burn_in")) c.mcmc.burn_in = m["burn_in"].get<std::int64_t>();
    if (m.contains("thinning")) c.mcmc.thinning = m["thinning"].get<std::int64_t>();
    if (m.contains("step_scale")) c.mcmc.step_scale = m["step_scale"].get<double>();
    if (m.contains("target_acceptance"))
      c.mcmc.target_acceptance = m["target_acceptance"].get<double>();
  }
  if (j.contains("use_mcmc")) c.use_mcmc = j["use_mcmc"].get<bool>();
  if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("grid_points")) c.grid_points = j["grid_points"].get<std::int64_t>();
  if (j.contains("box_halfwidth")) c.box_halfwidth = j["box_halfwidth"].get<double>();
  if (j.contains("tol")) c.tol = j["tol"].get<double>();
  if (j.contains("workers")) c.workers = j["workers"].get<int>();
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return config_from_json(j);
}

inline nlohmann::json report_to_json(const ExperimentReport& rep) {
  nlohmann::json j;
  j["experiment"] = rep.experiment;
  j["version"] = rep.version;
  j["wall_time_seconds"] = rep.wall_time_seconds;
  j["all_pass"] = rep.all_pass;
  if (!rep.config_json.empty()) j["config"] = nlohmann::json::parse(rep.config_json);
  auto rows = nlohmann::json::array();
  for (const auto& r : rep.rows) {
    nlohmann::json row;
    row["n"] = r.n;
    auto put = [&row](const char* key, double v) {
      if (std::isfinite(v))
        row[key] = v;
      else
        row[key] = nullptr;
    };
    put("mc_mean", r.mc_mean);
    put("mc_var", r.mc_var);
    put("mc_stderr", r.mc_stderr);
    put("exact_mean", r.exact_mean);
    put("exact_var", r.exact_var);
    put("limit_value", r.limit_value);
    put("ks_stat", r.ks_stat);
    put("ks_pvalue", r.ks_pvalue);
    row["pass"] = r.pass;
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

/// Runs the experiment and writes report.csv and report.json into the
/// configured output directory (if set).
inline ExperimentReport run_and_write(const ExperimentConfig& cfg) {
  auto rep = run_experiment(cfg);
  rep.config_json = to_json(cfg).dump();
  if (!cfg.output_dir.empty()) {
    std::filesystem::create_directories(cfg.output_dir);
    const auto dir = std::filesystem::path(cfg.output_dir);
    std::ofstream csv(dir / "report.csv");
    write_report_csv(rep, csv);
    std::ofstream js(dir / "report.json");
    js << report_to_json(rep).dump(2) << "\n";
  }
  return rep;
}

}  // namespace betalog
