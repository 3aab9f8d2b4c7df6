#pragma once
// Flat, typed key = value experiment configuration. Versioned schema;
// unknown keys are errors.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "netform/cycles.hpp"
#include "netform/equilibrium.hpp"

namespace netform {

enum class RunMode { BaselineClosedForm, FeOnlyMc, FullSimulated, PointId };
enum class CriterionChoice { Nonparametric, Parametric, Both };

struct ExperimentConfig {
  int version = 1;
  RunMode mode = RunMode::FullSimulated;
  // DGP
  int n = 100;
  double gamma0 = 4.0;
  std::vector<double> beta0 = {1.0};
  int z_support = 21;
  double sigma_a = 1.0;
  double rho = 0.0;
  CovariateKind covariate = CovariateKind::Jaccard;
  bool dyad_const = false;
  int sweep_cap = 100;
  // criterion
  double gamma_min = -40.0, gamma_max = 40.0, gamma_step = 1.0;
  CriterionChoice criterion = CriterionChoice::Both;
  std::uint64_t cell_min = 10;
  std::vector<ConfigClass> restrictions = {ConfigClass::Tetrad};
  // integration / estimation budgets
  std::uint64_t mc_draws_fe = 100'000;
  std::uint64_t hexad_samples = 1'000'000;
  bool require_isolation = false;
  // replication
  std::vector<std::uint64_t> replications = {1};
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "out";
  int jobs = 1;

  DgpSpec dgp() const;
  std::vector<double> gamma_grid() const;
};

ExperimentConfig parse_config_file(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text);
std::string config_to_text(const ExperimentConfig& cfg);

}  // namespace netform
