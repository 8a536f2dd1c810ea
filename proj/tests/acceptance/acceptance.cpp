// Acceptance suite: one PASS/FAIL line per criterion.
//   prk_acceptance            run all criteria
//   prk_acceptance --only N   run criterion N

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prk/acw.hpp"
#include "prk/bounds.hpp"
#include "prk/instance_io.hpp"
#include "prk/measurement.hpp"
#include "prk/solver.hpp"
#include "prk/studies.hpp"

namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [violated]");
  }
};

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

prk::Rng criterion_rng(int id) { return prk::Rng(0xACCE97, static_cast<std::uint64_t>(id)); }

// 1. pr_kaczmarz_step(±x, a_i, b_i) = ±x within 1e-12 for 1000 instances, n <= 50, under 1 s.
Verdict fixed_point() {
  Verdict v;
  prk::Rng rng = criterion_rng(1);
  double worst = 0.0;
  std::size_t steps = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng.index(50);
    const std::size_t m = 1 + rng.index(4 * n);
    const prk::Signal x = prk::random_signal(n, 0.1 + 10.0 * rng.uniform(), rng);
    const auto ms = prk::generate_uniform_instance(n, m, x, rng);
    for (std::size_t i = 0; i < m; ++i) {
      const auto a = prk::UnitVector::from_unit(ms.row(i).transpose());
      worst = std::max(worst, (prk::pr_kaczmarz_step(x.x(), a, ms.magnitude(i)) - x.x()).norm());
      worst = std::max(worst, (prk::pr_kaczmarz_step(-x.x(), a, ms.magnitude(i)) + x.x()).norm());
      steps += 2;
    }
  }
  v.require(worst <= 1e-12, "max error " + fmt(worst) + " <= 1e-12 over " + std::to_string(steps) + " steps");
  return v;
}

// 2. |⟨a, X_{k+1}⟩| - b <= 1e-10·(1 + b) after every step of every run.
Verdict hyperplane() {
  Verdict v;
  prk::Rng rng = criterion_rng(2);
  std::size_t steps = 0, violations = 0;
  double worst = 0.0;
  prk::RunOptions options;
  options.record_residual = false;
  options.on_step = [&](const prk::StepEvent& e) {
    ++steps;
    const double gap = std::abs(std::abs(e.row.dot(e.iterate)) - e.magnitude);
    worst = std::max(worst, gap / (1.0 + e.magnitude));
    violations += gap > 1e-10 * (1.0 + e.magnitude);
  };
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 2 + rng.index(49);
    const prk::Signal x = prk::random_signal(n, 0.1 + 10.0 * rng.uniform(), rng);
    const auto ms = prk::generate_uniform_instance(n, 10 * n, x, rng);
    const prk::Vector x0 = prk::sample_uniform_sphere(n, rng).coords() * (5.0 * rng.uniform());
    prk::run(prk::RowMeasure::finite(ms), x0, 500, rng.derive(1), nullptr, options);
    prk::run(prk::RowMeasure::finite(ms, prk::SelectionRule::kSquaredNorm), x0, 500, rng.derive(2), nullptr,
             options);
    prk::run(prk::RowMeasure::uniform_sphere(x), x0, 500, rng.derive(3), nullptr, options);
  }
  v.require(violations == 0, std::to_string(violations) + " violations in " + std::to_string(steps) +
                                 " steps (max scaled gap " + fmt(worst) + ")");
  return v;
}

// 3. Identity system n=5, 1e4 runs, k=10: mean ratio within 3 stderr of (1 - 1/5)^10, under 10 s.
Verdict linear_baseline() {
  Verdict v;
  const auto pts = prk::linear_baseline(5, 10, 10000, criterion_rng(3));
  const auto& p = pts.at(10);
  const double expected = std::pow(1.0 - 1.0 / 5.0, 10);
  v.require(std::abs(expected - 0.10737) < 5e-6, "(4/5)^10 = " + fmt(expected, 10));
  v.require(std::abs(p.ratio.mean - expected) <= 3.0 * p.ratio.std_error,
            "mean " + fmt(p.ratio.mean) + " vs " + fmt(expected) + " (3 stderr = " + fmt(3.0 * p.ratio.std_error) +
                ")");
  return v;
}

// 4. 1e7 uniform draws at (n, θ) ∈ {2,4,10}×{π/16,π/8,π/2}: diagonal and λ_max within 3 stderr, under 60 s.
Verdict wedge_moments() {
  Verdict v;
  const prk::Rng rng = criterion_rng(4);
  std::size_t checks = 0, misses = 0;
  double worst_z = 0.0;
  std::string where;
  std::uint64_t point = 0;
  for (std::size_t n : {2, 4, 10}) {
    for (double theta : {kPi / 16, kPi / 8, kPi / 2}) {
      const auto est = prk::wedge_moments_mc(n, theta, 10000000, rng.derive(point++));
      // Independent oracle: closed-form diagonal evaluated here.
      std::vector<double> diag(n, theta / (n * kPi));
      diag[0] = (theta - std::sin(theta)) / (n * kPi);
      diag[1] = (theta + std::sin(theta)) / (n * kPi);
      const auto check = [&](double measured, double expected, double se, const std::string& label) {
        ++checks;
        const double z = std::abs(measured - expected) / se;
        if (z > worst_z) {
          worst_z = z;
          where = label;
        }
        misses += !(std::abs(measured - expected) <= 3.0 * se);
      };
      const std::string tag = "n=" + std::to_string(n) + ",theta=" + fmt(theta, 4);
      for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        check(est.mean(k, k), diag[i], est.std_error(k, k), tag + ",M" + std::to_string(i + 1));
      }
      check(est.lambda_max, diag[1], est.lambda_max_std_error, tag + ",lambda_max");
    }
  }
  v.require(misses == 0, std::to_string(checks - misses) + "/" + std::to_string(checks) +
                             " entries within 3 stderr (max |z| " + fmt(worst_z, 3) + " at " + where + ")");
  return v;
}

// 5. n=4, θ ∈ {π/32, π/16, π/8}, 1e6 draws: ratio <= 1 - (1 - 4(θ + sinθ)/π)/n + 3 stderr, under 60 s.
Verdict decrement() {
  Verdict v;
  const std::vector<double> thetas = {kPi / 32, kPi / 16, kPi / 8};
  const auto pts = prk::decrement_curve(4, thetas, 1000000, criterion_rng(5));
  for (const auto& p : pts) {
    const double bound = 1.0 - (1.0 - 4.0 * (p.theta + std::sin(p.theta)) / kPi) / 4.0;
    v.require(p.ratio.mean <= bound + 3.0 * p.ratio.std_error,
              "theta=" + fmt(p.theta, 4) + ": " + fmt(p.ratio.mean) + " <= " + fmt(bound) + " + " +
                  fmt(3.0 * p.ratio.std_error, 3));
  }
  return v;
}

// 6. n=10, δ=0.1, K=2000, 500 trials: escape frequency <= 0.06829 + 3 binomial stderr, under 5 min.
Verdict escape() {
  Verdict v;
  const auto est = prk::estimate_escape_probability(10, 0.1, 500, 2000, criterion_rng(6));
  v.require(std::abs(est.bound - 0.06829) < 1e-5, "bound " + fmt(est.bound, 10));
  v.require(est.frequency <= 0.06829 + 3.0 * est.std_error,
            std::to_string(est.escapes) + "/500 escaped, frequency " + fmt(est.frequency) + " <= 0.06829 + " +
                fmt(3.0 * est.std_error, 3));
  return v;
}

// 7. n=20, m=400, spectral init, ε=1e-4, K = ⌈2(ln(1/ε) + ln(2/δ₂))n⌉, 100 seeds: >= 90% succeed, under 5 min.
Verdict end_to_end() {
  Verdict v;
  const double eps = 1e-4, delta2 = 0.05;
  const auto K = static_cast<std::size_t>(std::ceil(2.0 * (std::log(1.0 / eps) + std::log(2.0 / delta2)) * 20));
  const auto outcomes = prk::end_to_end(20, 400, K, eps, 100, criterion_rng(7));
  std::size_t successes = 0, escapes = 0;
  for (const auto& o : outcomes) {
    successes += o.final_dist * o.final_dist <= eps * o.initial_dist * o.initial_dist;
    escapes += o.escaped;
  }
  v.require(successes >= 90, "K=" + std::to_string(K) + ": " + std::to_string(successes) +
                                 "/100 reached eps (>= 90), " + std::to_string(escapes) + " left the basin");
  return v;
}

// 8. n=50, m=1000, 100 seeds: dist_to_sign_set(x0, x) <= 0.3‖x‖ in >= 95%, under 2 min.
Verdict spectral_init() {
  Verdict v;
  const auto p = prk::init_quality(50, 1000, 100, 0.3, criterion_rng(8));
  const auto within = static_cast<std::size_t>(std::lround(p.fraction_within * 100));
  v.require(within >= 95, std::to_string(within) + "/100 seeds within 0.3 (>= 95); mean relative error " +
                              fmt(p.relative_error.mean, 4) + " +- " + fmt(p.relative_error.std_error, 2));
  return v;
}

// 9. n=10, m=2000, θ=0.1, 500 refined wedges: min_margin >= 0.5 and max μ_A <= 2θ/π; duplicate rows fail.
Verdict acw_audit() {
  Verdict v;
  prk::Rng rng = criterion_rng(9);
  const auto ms = prk::generate_uniform_instance(10, 2000, prk::random_signal(10, 1.0, rng), rng);
  const auto report = prk::audit(ms, 0.1, 0.5, 500, rng.derive(1), true);
  v.require(report.min_margin >= 0.5, "min_margin " + fmt(report.min_margin) + " >= 0.5");
  v.require(report.max_wedge_measure <= 0.2 / kPi,
            "max_wedge_measure " + fmt(report.max_wedge_measure) + " <= " + fmt(0.2 / kPi));
  v.require(report.pass, "report.pass");

  prk::RowMatrix rows = prk::RowMatrix::Zero(2000, 10);
  rows.col(0).setOnes();
  const prk::MeasurementSet duplicate(rows, prk::Vector::Zero(2000));
  const auto bad = prk::audit(duplicate, 0.1, 0.5, 500, rng.derive(2), true);
  v.require(!bad.pass, "duplicate-row instance rejected (min_margin " + fmt(bad.min_margin) + ")");
  return v;
}

// 10. Per-trial success >= 2/3, L=16, 100 meta-trials: >= 95 within 9ε and no-majority <= 1%, under 10 min.
Verdict ensemble() {
  Verdict v;
  const auto r = prk::ensemble_guarantee(10, 200, 100, 16, 1e-4, 0.1, 100, criterion_rng(10));
  v.require(r.single_success_rate() >= 2.0 / 3.0,
            "single-run success " + fmt(r.single_success_rate(), 4) + " >= 2/3 (" +
                std::to_string(r.single_successes) + "/" + std::to_string(r.single_trials) + ")");
  v.require(r.within_bound >= 95, std::to_string(r.within_bound) + "/100 within 9 eps (>= 95)");
  v.require(r.no_majority <= 1, std::to_string(r.no_majority) + "/100 no-majority (<= 1)");
  return v;
}

// 11. Two executions of every CLI command with identical flags give identical payloads, timing fields aside.
nlohmann::json strip_timing(nlohmann::json doc) {
  if (doc.is_object()) {
    doc.erase("wall_clock_s");
    for (auto& [key, value] : doc.items()) value = strip_timing(value);
  } else if (doc.is_array()) {
    for (auto& value : doc) value = strip_timing(value);
  }
  return doc;
}

Verdict determinism() {
  Verdict v;
  const fs::path root = fs::temp_directory_path() / "prk_acceptance_determinism";
  fs::remove_all(root);
  const std::string cli = PRK_CLI_PATH;
  const auto inst = (root / "inst.json").string();

  struct Command {
    std::string name;
    std::string args;
    std::vector<std::string> files;
  };
  const std::vector<Command> commands = {
      {"gen", "gen --n 10 --m 200 --seed 1", {""}},
      {"solve", "solve --instance " + inst + " --eps 1e-4 --seed 2", {".csv", ".json"}},
      {"ensemble", "ensemble --instance " + inst + " --eps 1e-4 -K 100 -L 16 --seed 3", {".json"}},
      {"acw-audit", "acw-audit --instance " + inst + " --theta 0.1 --wedges 100 --refine --seed 4",
       {".csv", ".json"}},
      {"study", "study decrement-curve --n 4 --draws 20000 --seed 5", {".csv", ".json"}},
  };

  for (const char* run : {"a", "b"}) {
    fs::create_directories(root / run);
    for (const auto& c : commands) {
      const auto out = c.name == "gen" ? (root / run / "inst.json").string() : (root / run / c.name).string();
      const std::string line = cli + " " + c.args + " --out " + out + " > /dev/null 2>&1";
      const int rc = std::system(line.c_str());
      if (rc != 0) v.require(false, c.name + " exited with status " + std::to_string(rc));
      if (c.name == "gen" && std::string(run) == "a") fs::copy_file(out, inst);
    }
  }

  std::size_t compared = 0;
  for (const auto& c : commands) {
    for (const auto& suffix : c.files) {
      const auto file = (c.name == "gen" ? std::string("inst.json") : c.name + suffix);
      const auto a = prk::read_text_file(root / "a" / file);
      const auto b = prk::read_text_file(root / "b" / file);
      bool same;
      if (file.ends_with(".json")) {
        auto ja = strip_timing(nlohmann::json::parse(a)), jb = strip_timing(nlohmann::json::parse(b));
        // The output path is part of the recorded config and differs by design.
        for (auto* j : {&ja, &jb}) {
          if (j->contains("provenance")) (*j)["provenance"]["config"].erase("out");
          if (j->contains("config")) (*j)["config"].erase("out");
        }
        same = ja == jb;
      } else {
        same = a == b;
      }
      ++compared;
      if (!same) v.require(false, file + " differs between runs");
    }
  }
  v.require(v.pass, std::to_string(compared) + " artifacts compared");
  fs::remove_all(root);
  return v;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  ///< 0 = no runtime limit
  std::function<Verdict()> fn;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "fixed-point exactness", 1.0, fixed_point},
      {2, "hyperplane postcondition", 0.0, hyperplane},
      {3, "linear baseline", 10.0, linear_baseline},
      {4, "wedge moments", 60.0, wedge_moments},
      {5, "one-step decrement", 60.0, decrement},
      {6, "escape probability", 300.0, escape},
      {7, "end-to-end convergence", 300.0, end_to_end},
      {8, "spectral init quality", 120.0, spectral_init},
      {9, "ACW audit", 120.0, acw_audit},
      {10, "ensemble guarantee", 600.0, ensemble},
      {11, "determinism", 0.0, determinism},
  };

  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
      return 2;
    }
  }

  int failures = 0, ran = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.fn();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0) v.require(elapsed < c.budget_s, "runtime " + fmt(elapsed, 3) + " s < " + fmt(c.budget_s) + " s");
    std::printf("%s  criterion %2d  %-26s %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str());
    std::fflush(stdout);
    failures += !v.pass;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
