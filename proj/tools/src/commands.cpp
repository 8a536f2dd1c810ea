#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "cli.hpp"
#include "prk/acw.hpp"
#include "prk/bounds.hpp"
#include "prk/ensemble.hpp"
#include "prk/error.hpp"
#include "prk/instance_io.hpp"
#include "prk/json_format.hpp"
#include "prk/measurement.hpp"
#include "prk/solver.hpp"
#include "prk/spectral_init.hpp"
#include "prk/studies.hpp"
#include "prk/trace_io.hpp"

namespace prk::cli {

namespace {

using nlohmann::json;

json common_json(const CommonConfig& c) {
  return {{"seed", c.seed}, {"threads", c.threads}, {"out", c.out}};
}

void require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorKind::kInvalidArgument, message);
}

void require_out(const CommonConfig& c) { require(!c.out.empty(), "--out is required"); }

/// Stream layout under the run seed: derive(0) random init, derive(2).derive(l)
/// Kaczmarz trial l. `solve` is trial 0, so an L=1 ensemble reproduces it.
Rng trial_rng(const Rng& base, std::size_t trial) { return base.derive(2).derive(trial); }

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

json provenance(const json& config, std::uint64_t seed) {
  return {{"build", build_tag()}, {"config", config}, {"seed", seed}};
}

std::string with_suffix(const std::string& prefix, const char* suffix) { return prefix + suffix; }

struct Start {
  Vector x0;
  json init;
  double norm_estimate = 0.0;
};

Start prepare_start(const SolveConfig& c, const MeasurementSet& ms, const Rng& base) {
  Start start;
  start.norm_estimate = norm_scale(ms).norm_estimate;
  if (c.init == "spectral") {
    const InitResult init = initialize(ms);
    start.x0 = init.x0;
    start.init = init_result_to_json(init);
  } else if (c.init == "given") {
    require(!c.x0_path.empty(), "--init given needs --x0 <file>");
    start.x0 = read_vector(c.x0_path);
    if (static_cast<std::size_t>(start.x0.size()) != ms.n()) {
      throw Error(ErrorKind::kInvalidDimension, "--x0 length does not match instance dimension");
    }
    start.init = {{"x0", vector_to_json(start.x0)}};
  } else if (c.init == "random") {
    Rng init_rng = base.derive(0);
    start.x0 = sample_uniform_sphere(ms.n(), init_rng).coords() * start.norm_estimate;
    start.init = {{"x0", vector_to_json(start.x0)}, {"lambda0", start.norm_estimate}};
  } else {
    require(false, "--init must be spectral, given or random");
  }
  start.init["mode"] = c.init;
  return start;
}

void validate_solve(const SolveConfig& c) {
  require(!c.instance.empty(), "--instance is required");
  require(c.eps > 0.0 && c.eps < 1.0, "--eps must lie in (0, 1)");
  require(c.delta2 > 0.0 && c.delta2 <= 1.0, "--delta2 must lie in (0, 1]");
  require(c.measure == "finite" || c.measure == "uniform-oracle", "--measure must be finite or uniform-oracle");
}

RowMeasure make_measure(const SolveConfig& c, const MeasurementSet& ms) {
  if (c.measure == "uniform-oracle") {
    require(ms.hidden_signal().has_value(), "--measure uniform-oracle needs an instance with a hidden signal");
    return RowMeasure::uniform_sphere(*ms.hidden_signal());
  }
  return RowMeasure::finite(ms, selection_rule_from_string(c.selector));
}

json optional_number(double value) { return std::isfinite(value) ? json(value) : json(nullptr); }

}  // namespace

json to_json(const GenConfig& c) {
  json j = common_json(c.common);
  j["n"] = c.n;
  j["m"] = c.m.value_or(20 * c.n);
  j["generator"] = c.generator;
  j["signal_norm"] = c.signal_norm;
  j["no_signal"] = c.no_signal;
  return j;
}

json to_json(const SolveConfig& c) {
  json j = common_json(c.common);
  j["instance"] = c.instance;
  j["init"] = c.init;
  j["x0"] = c.x0_path;
  j["K"] = c.iterations ? json(*c.iterations) : json(nullptr);
  j["eps"] = c.eps;
  j["delta2"] = c.delta2;
  j["selector"] = c.selector;
  j["measure"] = c.measure;
  return j;
}

json to_json(const EnsembleConfig& c) {
  json j = to_json(c.solve);
  j["L"] = c.trials;
  j["delta1"] = c.delta1;
  j["radius"] = c.radius ? json(*c.radius) : json(nullptr);
  j["rho"] = c.rho ? json(*c.rho) : json(nullptr);
  return j;
}

json to_json(const AuditConfig& c) {
  json j = common_json(c.common);
  j["instance"] = c.instance;
  j["theta"] = c.theta;
  j["alpha"] = c.alpha;
  j["wedges"] = c.wedges;
  j["refine"] = c.refine;
  return j;
}

json to_json(const StudyConfig& c) {
  json j = common_json(c.common);
  j["name"] = c.name;
  j["n"] = c.n;
  j["thetas"] = c.thetas;
  j["deltas"] = c.deltas;
  j["dims"] = c.dims;
  j["draws"] = c.draws;
  j["trials"] = c.trials;
  j["K"] = c.iterations;
  j["iterations_per_n"] = c.iterations_per_n;
  j["m"] = c.m.value_or(20 * c.n);
  j["seeds"] = c.seeds;
  j["runs"] = c.runs;
  j["delta"] = c.delta;
  j["threshold"] = c.threshold;
  return j;
}

int cmd_generate(const GenConfig& c, std::ostream& out) {
  require(c.n >= 1, "--n must be >= 1");
  require(!c.m || *c.m >= 1, "--m must be >= 1");
  require(c.generator == "uniform" || c.generator == "gaussian", "--generator must be uniform or gaussian");
  require(c.signal_norm > 0.0 && std::isfinite(c.signal_norm), "--signal-norm must be positive");
  require_out(c.common);
  const std::size_t m = c.m.value_or(20 * c.n);

  const Rng base(c.common.seed);
  Rng signal_rng = base.derive(0);
  Rng rows_rng = base.derive(1);
  const Signal signal = random_signal(c.n, c.signal_norm, signal_rng);
  const MeasurementSet ms = c.generator == "uniform" ? generate_uniform_instance(c.n, m, signal, rows_rng)
                                                     : generate_gaussian_rows(c.n, m, signal, rows_rng);

  json doc = instance_to_json(ms, !c.no_signal);
  doc["provenance"] = provenance(to_json(c), c.common.seed);
  write_text_file(c.common.out, dump_json(doc));
  out << fmt::format("wrote {}: n={} m={} generator={} seed={} signal={}\n", c.common.out, c.n, m, c.generator,
                     c.common.seed, c.no_signal ? "hidden-omitted" : "included");
  return kSuccess;
}

int cmd_solve(const SolveConfig& c, std::ostream& out, std::ostream& err) {
  validate_solve(c);
  require_out(c.common);
  const MeasurementSet ms = read_instance(c.instance);
  const std::size_t iterations = c.iterations.value_or(theorem_iterations(c.eps, c.delta2, ms.n()));
  const RowMeasure mu = make_measure(c, ms);
  const Rng base(c.common.seed);
  const Start start = prepare_start(c, ms, base);
  if (!ms.hidden_signal()) {
    err << "warning: metric-unavailable: instance has no hidden signal; trace records residuals only\n";
  }

  const Stopwatch watch;
  const ConvergenceTrace trace = run(mu, start.x0, iterations, trial_rng(base, 0));
  const double elapsed = watch.seconds();

  const TraceRecord& first = trace.records.front();
  const TraceRecord& last = trace.records.back();
  json summary;
  summary["iterations"] = iterations;
  summary["initial_dist"] = optional_number(first.dist);
  summary["final_dist"] = optional_number(last.dist);
  summary["final_residual"] = optional_number(last.residual);
  summary["success"] = std::isfinite(last.dist)
                           ? json(last.dist * last.dist <= c.eps * first.dist * first.dist)
                           : json(nullptr);
  summary["escaped"] = trace.basin_escaped;
  summary["first_escape_step"] = trace.first_escape_step ? json(*trace.first_escape_step) : json(nullptr);
  summary["wall_clock_s"] = elapsed;

  json sidecar = trace_metadata(trace);
  sidecar["provenance"] = provenance(to_json(c), c.common.seed);
  sidecar["summary"] = summary;
  sidecar["init"] = start.init;
  sidecar["final_iterate"] = vector_to_json(trace.final_iterate);

  write_text_file(with_suffix(c.common.out, ".csv"), trace_to_csv(trace));
  write_text_file(with_suffix(c.common.out, ".json"), dump_json(sidecar));
  out << fmt::format("solve: K={} initial_dist={} final_dist={} success={} escaped={}\n", iterations,
                     format_double(first.dist), format_double(last.dist), summary["success"].dump(),
                     trace.basin_escaped);
  return kSuccess;
}

int cmd_ensemble(const EnsembleConfig& c, std::ostream& out, std::ostream& err) {
  validate_solve(c.solve);
  require_out(c.solve.common);
  require(c.trials >= 1, "--L must be >= 1");
  require(c.delta1 > 0.0 && c.delta1 <= 0.5, "--delta1 must lie in (0, 1/2]");
  require(!c.radius || *c.radius > 0.0, "--radius must be positive");
  require(!c.rho || *c.rho > 0.0, "--rho must be positive");
  if (c.delta1 + c.solve.delta2 > 1.0 / 3.0) {
    err << "warning: delta1 + delta2 > 1/3; the ensemble guarantee assumes otherwise\n";
  }

  const MeasurementSet ms = read_instance(c.solve.instance);
  const std::size_t iterations =
      c.solve.iterations.value_or(theorem_iterations(c.solve.eps, c.solve.delta2, ms.n()));
  const RowMeasure mu = make_measure(c.solve, ms);
  const Rng base(c.solve.common.seed);
  const Start start = prepare_start(c.solve, ms, base);
  const double rho = c.rho.value_or(default_initial_error_bound(start.norm_estimate, c.delta1));
  const double radius = c.radius.value_or(ensemble_radius(c.solve.eps, rho));
  const Signal* signal = mu.signal();

  json doc;
  doc["provenance"] = provenance(to_json(c), c.solve.common.seed);
  doc["init"] = start.init;
  doc["radius"] = radius;
  doc["rho"] = rho;
  doc["K"] = iterations;

  const auto describe_trials = [&](const std::vector<Vector>& estimates, const std::vector<std::size_t>& counts) {
    json trials = json::array();
    const double initial = signal ? dist_to_sign_set(start.x0, signal->x()) : NAN;
    for (std::size_t l = 0; l < estimates.size(); ++l) {
      json t = {{"trial", l}, {"ball_count", counts[l]}};
      if (signal) {
        const double d = dist_to_sign_set(estimates[l], signal->x());
        t["final_dist"] = d;
        t["success"] = d * d <= c.solve.eps * initial * initial;
      }
      trials.push_back(std::move(t));
    }
    return trials;
  };

  const Stopwatch watch;
  // The trials run inside ensemble_rk; this stream matches trial_rng(base, l).
  const Rng trials_base = base.derive(2);
  try {
    const EnsembleResult result = ensemble_rk(mu, start.x0, iterations, c.trials, radius, trials_base,
                                              c.solve.common.threads);
    doc["wall_clock_s"] = watch.seconds();
    doc["status"] = "ok";
    doc["chosen_trial"] = result.chosen_trial;
    doc["cluster_size"] = result.cluster_size;
    doc["estimate"] = vector_to_json(result.estimate);
    doc["trials"] = describe_trials(result.estimates, ball_counts(result.estimates, radius));
    if (signal) {
      const double initial = dist_to_sign_set(start.x0, signal->x());
      const double final_dist = dist_to_sign_set(result.estimate, signal->x());
      doc["summary"] = {{"initial_dist", initial},
                        {"final_dist", final_dist},
                        {"within_9eps", final_dist * final_dist <= 9.0 * c.solve.eps * initial * initial}};
    }
    write_text_file(with_suffix(c.solve.common.out, ".json"), dump_json(doc));
    out << fmt::format("ensemble: chose trial {} with cluster {}/{} (radius {})\n", result.chosen_trial,
                       result.cluster_size, c.trials, format_double(radius));
    return kSuccess;
  } catch (const NoMajorityError& e) {
    doc["wall_clock_s"] = watch.seconds();
    doc["status"] = "no-majority";
    doc["trials"] = describe_trials(e.estimates(), e.ball_counts());
    write_text_file(with_suffix(c.solve.common.out, ".json"), dump_json(doc));
    err << "ensemble: " << e.what() << "; increase --L or --radius\n";
    return kAlgorithmFailure;
  }
}

int cmd_acw_audit(const AuditConfig& c, std::ostream& out) {
  require(!c.instance.empty(), "--instance is required");
  require(c.theta > 0.0 && c.theta < std::numbers::pi, "--theta must lie in (0, pi)");
  require(c.wedges >= 1, "--wedges must be >= 1");
  require_out(c.common);
  const MeasurementSet ms = read_instance(c.instance);

  const Stopwatch watch;
  const AcwReport report = audit(ms, c.theta, c.alpha, c.wedges, Rng(c.common.seed), c.refine, c.common.threads);
  json doc = acw_report_to_json(report);
  doc["provenance"] = provenance(to_json(c), c.common.seed);
  doc["wall_clock_s"] = watch.seconds();

  write_text_file(with_suffix(c.common.out, ".json"), dump_json(doc));
  write_text_file(with_suffix(c.common.out, ".csv"), acw_samples_csv(report));
  out << fmt::format("acw-audit (estimate): {} min_margin={} (target {}) max_wedge_measure={} (bound {})\n",
                     report.pass ? "pass" : "fail", format_double(report.min_margin),
                     format_double(report.alpha_target), format_double(report.max_wedge_measure),
                     format_double(report.measure_bound));
  return kSuccess;
}

namespace {

std::string csv_row(std::initializer_list<std::string> fields) {
  std::string row;
  for (const auto& f : fields) {
    if (!row.empty()) row += ',';
    row += f;
  }
  return row + '\n';
}

std::string num(double v) { return format_double(v); }
std::string num(std::size_t v) { return std::to_string(v); }

}  // namespace

int cmd_study(const StudyConfig& c, std::ostream& out) {
  require_out(c.common);
  StudyConfig r = c;
  const Rng rng(c.common.seed);
  const unsigned threads = c.common.threads;
  std::string csv;

  const Stopwatch watch;
  if (c.name == "decrement-curve") {
    if (r.thetas.empty()) r.thetas = {std::numbers::pi / 32, std::numbers::pi / 16, std::numbers::pi / 8};
    csv = "theta,n,draws,mean_ratio,stderr,bound\n";
    for (const auto& p : decrement_curve(r.n, r.thetas, r.draws, rng, threads)) {
      csv += csv_row({num(p.theta), num(r.n), num(r.draws), num(p.ratio.mean), num(p.ratio.std_error), num(p.bound)});
    }
  } else if (c.name == "escape-prob") {
    if (r.deltas.empty()) r.deltas = {0.05, 0.1, 0.2};
    csv = "delta,n,trials,K,frequency,stderr,bound\n";
    for (const auto& p : escape_curve(r.n, r.deltas, r.trials, r.iterations, rng, threads)) {
      csv += csv_row({num(p.delta), num(r.n), num(r.trials), num(r.iterations), num(p.frequency),
                      num(p.std_error), num(p.bound)});
    }
  } else if (c.name == "rate-vs-n") {
    if (r.dims.empty()) r.dims = {5, 10, 20};
    csv = "n,K,trials,delta,mean_ratio,stderr,escaped_fraction,bound\n";
    for (const auto& p : rate_vs_n(r.dims, r.iterations_per_n, r.delta, r.trials, rng, threads)) {
      csv += csv_row({num(p.n), num(p.iterations), num(r.trials), num(r.delta), num(p.ratio.mean),
                      num(p.ratio.std_error), num(p.escaped_fraction), num(p.bound)});
    }
  } else if (c.name == "linear-baseline") {
    csv = "step,n,runs,mean_ratio,stderr,step_ratio,step_ratio_stderr,bound\n";
    for (const auto& p : linear_baseline(r.n, r.iterations, r.runs, rng, threads)) {
      csv += csv_row({num(p.step), num(r.n), num(r.runs), num(p.ratio.mean), num(p.ratio.std_error),
                      num(p.step_ratio), num(p.step_ratio_std_error), num(p.bound)});
    }
  } else if (c.name == "init-quality") {
    const std::size_t m = r.m.value_or(20 * r.n);
    r.m = m;
    csv = "n,m,seeds,mean_rel_error,stderr,fraction_within,threshold,ambiguous\n";
    const auto p = init_quality(r.n, m, r.seeds, r.threshold, rng, threads);
    csv += csv_row({num(p.n), num(p.m), num(r.seeds), num(p.relative_error.mean), num(p.relative_error.std_error),
                    num(p.fraction_within), num(p.threshold), num(p.ambiguous)});
  } else {
    require(false, "unknown study '" + c.name + "'");
  }

  json sidecar = provenance(to_json(r), c.common.seed);
  sidecar["study"] = c.name;
  sidecar["wall_clock_s"] = watch.seconds();
  write_text_file(with_suffix(c.common.out, ".csv"), csv);
  write_text_file(with_suffix(c.common.out, ".json"), dump_json(sidecar));
  out << fmt::format("study {}: wrote {}\n", c.name, with_suffix(c.common.out, ".csv"));
  return kSuccess;
}

}  // namespace prk::cli
