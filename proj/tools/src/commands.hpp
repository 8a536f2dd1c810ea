#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace prk::cli {

struct CommonConfig {
  std::uint64_t seed = 0;
  unsigned threads = 0;  ///< 0 = all cores
  std::string out;
};

struct GenConfig {
  CommonConfig common;
  std::size_t n = 0;
  std::optional<std::size_t> m;  ///< default 20n
  std::string generator = "uniform";
  double signal_norm = 1.0;
  bool no_signal = false;
};

struct SolveConfig {
  CommonConfig common;
  std::string instance;
  std::string init = "spectral";
  std::string x0_path;
  std::optional<std::size_t> iterations;  ///< default ⌈2(ln(1/ε)+ln(2/δ₂))n⌉
  double eps = 1e-6;
  double delta2 = 0.05;
  std::string selector = "uniform";
  std::string measure = "finite";
};

struct EnsembleConfig {
  SolveConfig solve;
  std::size_t trials = 16;
  double delta1 = 0.25;
  std::optional<double> radius;
  std::optional<double> rho;
};

struct AuditConfig {
  CommonConfig common;
  std::string instance;
  double theta = 0.1;
  double alpha = 0.5;
  std::size_t wedges = 500;
  bool refine = false;
};

struct StudyConfig {
  CommonConfig common;
  std::string name;
  std::size_t n = 4;
  std::vector<double> thetas;
  std::vector<double> deltas;
  std::vector<std::size_t> dims;
  std::size_t draws = 1000000;
  std::size_t trials = 500;
  std::size_t iterations = 2000;
  std::size_t iterations_per_n = 20;
  std::optional<std::size_t> m;  ///< default 20n
  std::size_t seeds = 100;
  std::size_t runs = 10000;
  double delta = 0.1;
  double threshold = 0.3;
};

inline const std::vector<std::string>& study_names() {
  static const std::vector<std::string> names = {"decrement-curve", "escape-prob", "rate-vs-n",
                                                 "linear-baseline", "init-quality"};
  return names;
}

nlohmann::json to_json(const GenConfig& c);
nlohmann::json to_json(const SolveConfig& c);
nlohmann::json to_json(const EnsembleConfig& c);
nlohmann::json to_json(const AuditConfig& c);
nlohmann::json to_json(const StudyConfig& c);

/// Each command validates its config, computes, writes its artifacts and
/// returns an exit code. Library errors propagate as prk::Error.
int cmd_generate(const GenConfig& config, std::ostream& out);
int cmd_solve(const SolveConfig& config, std::ostream& out, std::ostream& err);
int cmd_ensemble(const EnsembleConfig& config, std::ostream& out, std::ostream& err);
int cmd_acw_audit(const AuditConfig& config, std::ostream& out);
int cmd_study(const StudyConfig& config, std::ostream& out);

}  // namespace prk::cli
