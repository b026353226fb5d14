#pragma once

#include "oulab/domain.hpp"
#include "oulab/mc_estimate.hpp"
#include "oulab/spectral_model.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace oulab {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr const char* kOulabVersion = "0.1.0";

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ModelConfig {
  std::vector<double> lambdas;  // empty: power law c k^{-p}, k = 1..d
  int d = 2;
  double c = 1.0;
  double p = 2.0;
};

struct DomainConfig {
  std::string kind = "half_space";  // whole_space | half_space | quadratic | ball_of_modes
  std::vector<double> b;            // half_space (default e_1)
  std::vector<double> t;            // quadratic
  int m = 1;                        // ball_of_modes
  double penalty_cap = DomainSpec::kDefaultPenaltyCap;
};

struct SemigroupConfig {
  double t = 1.0;
  std::vector<double> probe;  // empty: origin
  std::size_t outer = 200;    // outer points of the contraction check
};

struct SurfaceConfig {
  std::string g_variant = "domain";  // domain | half_space | quadratic | ball
  double r = 1.0;
  std::string f = "H0";
  double shell_width = 0.0;  // 0: chosen from the samples
  std::size_t samples = 100000;
};

struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  ModelConfig model;
  DomainConfig domain;
  double alpha = 1.0;
  double lambda = 1.0;
  std::vector<double> eps_ladder{0.2, 0.1, 0.05, 0.025};
  McParams mc{20000, 1.0 / 256, 1, 1};
  int degree_cap = 6;
  std::string outputs;  // empty: nothing written
  std::string test_function = "H0";
  SemigroupConfig semigroup;
  SurfaceConfig surface;

  SpectralModel spectral_model() const;
  DomainSpec domain_spec() const;
};

// Throws ConfigError naming the offending field.
void validate(const ExperimentConfig& cfg);

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

// FNV-1a 64 of the compact, key-sorted JSON; 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

struct CheckRecord {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  std::string relation = "le";  // le: lhs <= rhs + tol; eq: |lhs - rhs| <= tol
  bool statistical = false;     // a z-score style check
  bool pass = false;
};

CheckRecord make_check(std::string name, double lhs, double rhs, double tolerance, const std::string& relation,
                       bool statistical);

struct RunReport {
  std::string suite;
  std::string config_hash;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool statistical_enforced = false;
  std::vector<CheckRecord> checks;
  std::vector<std::string> warnings;
  std::vector<std::string> artifacts;
  std::size_t solves = 0;
  std::map<std::string, double> timing;  // seconds

  bool all_pass() const;
  int exit_code() const { return all_pass() ? 0 : 1; }
  // Without the timing block the JSON is a pure function of (config, seed).
  nlohmann::json to_json(bool with_timing = true) const;
};

// Every solve carries its l2, grad and penalty records exactly once.
bool report_complete(const RunReport& r);

struct RunOptions {
  std::string out_dir;  // overrides config.outputs when set
  int jobs = 0;         // 0: config.mc.jobs
  bool enforce_statistical = false;
};

std::vector<std::string> suite_names();

// suite: solve | semigroup | surface | validate-all | empty. Writes report.json and CSV files
// when an output directory is set.
RunReport run(const ExperimentConfig& cfg, const std::string& suite, const RunOptions& opt = {});

}  // namespace oulab
