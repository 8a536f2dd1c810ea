#include "cli.hpp"

#include <algorithm>
#include <ostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config_file.hpp"
#include "prk/ensemble.hpp"
#include "prk/error.hpp"

#ifndef PRK_BUILD_TAG
#define PRK_BUILD_TAG "unknown"
#endif

namespace prk::cli {

const char* build_tag() noexcept { return PRK_BUILD_TAG; }

namespace {

template <typename T>
std::vector<T> split_list(const std::string& text, const std::string& flag) {
  std::vector<T> values;
  for (const auto& item : CLI::detail::split(text, ',')) {
    T value{};
    if (!CLI::detail::lexical_cast(CLI::detail::trim_copy(item), value)) {
      throw CLI::ValidationError(flag, "'" + item + "' is not a valid list element");
    }
    values.push_back(value);
  }
  return values;
}

void add_common(CLI::App* cmd, CommonConfig& c, bool needs_out = true) {
  cmd->add_option("--seed", c.seed, "Base seed of the counter-based generator")->capture_default_str();
  cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores)")->capture_default_str();
  auto* out = cmd->add_option("--out", c.out, "Output path (prefix for multi-file commands)");
  if (needs_out) out->required();
  cmd->add_option("--config", "JSON file of default flag values (expanded before parsing)");
}

void add_solve_options(CLI::App* cmd, SolveConfig& c) {
  add_common(cmd, c.common);
  cmd->add_option("--instance", c.instance, "Instance JSON")->required();
  cmd->add_option("--init", c.init, "Initialization: spectral, given or random")
      ->check(CLI::IsMember({"spectral", "given", "random"}))
      ->capture_default_str();
  cmd->add_option("--x0", c.x0_path, "Starting point (JSON array) for --init given");
  cmd->add_option("-K,--iterations", c.iterations, "Kaczmarz steps (default from --eps and --delta2)");
  cmd->add_option("--eps", c.eps, "Target squared-error ratio")->capture_default_str();
  cmd->add_option("--delta2", c.delta2, "Failure probability of a single run")->capture_default_str();
  cmd->add_option("--selector", c.selector, "Row selection: uniform or squared-norm")
      ->check(CLI::IsMember({"uniform", "squared-norm"}))
      ->capture_default_str();
  cmd->add_option("--measure", c.measure, "finite (rows of the instance) or uniform-oracle")
      ->check(CLI::IsMember({"finite", "uniform-oracle"}))
      ->capture_default_str();
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomized Kaczmarz for phase retrieval", "prk"};
  app.set_version_flag("--version", std::string(build_tag()));
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  GenConfig gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic instance");
  add_common(gen_cmd, gen.common);
  gen_cmd->add_option("--n", gen.n, "Signal dimension")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--m", gen.m, "Number of measurements (default 20n)")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--generator", gen.generator, "uniform or gaussian")
      ->check(CLI::IsMember({"uniform", "gaussian"}))
      ->capture_default_str();
  gen_cmd->add_option("--signal-norm", gen.signal_norm, "Norm of the hidden signal")->capture_default_str();
  gen_cmd->add_flag("--no-signal", gen.no_signal, "Omit the hidden signal from the file");

  SolveConfig solve;
  auto* solve_cmd = app.add_subcommand("solve", "Run randomized Kaczmarz and write a convergence trace");
  add_solve_options(solve_cmd, solve);

  EnsembleConfig ensemble;
  auto* ens_cmd = app.add_subcommand("ensemble", "Run L independent solves and select a majority estimate");
  add_solve_options(ens_cmd, ensemble.solve);
  ens_cmd->add_option("-L,--trials", ensemble.trials, "Number of independent runs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  ens_cmd->add_option("--delta1", ensemble.delta1, "Initialization failure probability")->capture_default_str();
  ens_cmd->add_option("--radius", ensemble.radius, "Selection ball radius (default 2 sqrt(eps) rho)");
  ens_cmd->add_option("--rho", ensemble.rho, "Bound on the initial error (default from the norm estimate)");

  AuditConfig audit;
  auto* audit_cmd = app.add_subcommand("acw-audit", "Estimate the wedge condition of an instance");
  add_common(audit_cmd, audit.common);
  audit_cmd->add_option("--instance", audit.instance, "Instance JSON")->required();
  audit_cmd->add_option("--theta", audit.theta, "Maximum wedge angle")->capture_default_str();
  audit_cmd->add_option("--alpha", audit.alpha, "Target margin")->capture_default_str();
  audit_cmd->add_option("--wedges", audit.wedges, "Number of sampled wedges")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  audit_cmd->add_flag("--refine", audit.refine, "Locally refine the worst sampled wedges");

  StudyConfig study;
  std::string thetas, deltas, dims;
  auto* study_cmd = app.add_subcommand("study", "Run a Monte Carlo study and write a CSV table");
  add_common(study_cmd, study.common);
  study_cmd->add_option("name", study.name, "Study name")->required()->check(CLI::IsMember(study_names()));
  study_cmd->add_option("--n", study.n, "Dimension")->check(CLI::PositiveNumber)->capture_default_str();
  study_cmd->add_option("--thetas", thetas, "Comma-separated angles (decrement-curve)");
  study_cmd->add_option("--deltas", deltas, "Comma-separated relative errors (escape-prob)");
  study_cmd->add_option("--dims", dims, "Comma-separated dimensions (rate-vs-n)");
  study_cmd->add_option("--draws", study.draws, "Monte Carlo draws per point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  study_cmd->add_option("--trials", study.trials, "Runs per point")->check(CLI::PositiveNumber)->capture_default_str();
  study_cmd->add_option("-K,--iterations", study.iterations, "Steps per run")->capture_default_str();
  study_cmd->add_option("--iterations-per-n", study.iterations_per_n, "K / n for rate-vs-n")->capture_default_str();
  study_cmd->add_option("--m", study.m, "Measurements (init-quality, default 20n)")->check(CLI::PositiveNumber);
  study_cmd->add_option("--seeds", study.seeds, "Instances (init-quality)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  study_cmd->add_option("--runs", study.runs, "Runs (linear-baseline)")->check(CLI::PositiveNumber)->capture_default_str();
  study_cmd->add_option("--delta", study.delta, "Starting relative error (rate-vs-n)")->capture_default_str();
  study_cmd->add_option("--threshold", study.threshold, "Relative-error threshold (init-quality)")
      ->capture_default_str();

  try {
    args = expand_config(args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
    if (!thetas.empty()) study.thetas = split_list<double>(thetas, "--thetas");
    if (!deltas.empty()) study.deltas = split_list<double>(deltas, "--deltas");
    if (!dims.empty()) study.dims = split_list<std::size_t>(dims, "--dims");
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kIoFailure;
  }

  try {
    if (*gen_cmd) return cmd_generate(gen, out);
    if (*solve_cmd) return cmd_solve(solve, out, err);
    if (*ens_cmd) return cmd_ensemble(ensemble, out, err);
    if (*audit_cmd) return cmd_acw_audit(audit, out);
    if (*study_cmd) return cmd_study(study, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::kIo:
      case ErrorKind::kParse:
        return kIoFailure;
      case ErrorKind::kNoMajority:
        return kAlgorithmFailure;
      default:
        return kValidation;
    }
  }
  return kValidation;
}

}  // namespace prk::cli
