#include "prk/studies.hpp"

#include <algorithm>
#include <cmath>

#include "prk/acw.hpp"
#include "prk/bounds.hpp"
#include "prk/ensemble.hpp"
#include "prk/error.hpp"
#include "prk/measurement.hpp"
#include "prk/parallel.hpp"
#include "prk/solver.hpp"
#include "prk/spectral_init.hpp"

namespace prk {

MeanEstimate MeanAccumulator::estimate() const noexcept {
  MeanEstimate out;
  out.samples = count_;
  if (count_ == 0) return out;
  const auto n = static_cast<double>(count_);
  out.mean = sum_ / n;
  if (count_ > 1) {
    const double variance = std::max(0.0, (sum_sq_ - n * out.mean * out.mean) / (n - 1.0));
    out.std_error = std::sqrt(variance / n);
  }
  return out;
}

namespace {

std::size_t chunk_size(std::size_t total, std::size_t chunk) {
  const std::size_t base = total / kMonteCarloChunks;
  return base + (chunk < total % kMonteCarloChunks ? 1 : 0);
}

void require_positive(std::size_t value, const char* name) {
  if (value == 0) throw Error(ErrorKind::kInvalidArgument, std::string(name) + " must be positive");
}

}  // namespace

WedgeMomentEstimate wedge_moments_mc(std::size_t n, double theta, std::size_t draws, const Rng& rng,
                                     unsigned threads) {
  require_positive(draws, "draws");
  const Wedge wedge = canonical_wedge(theta, n);
  const std::size_t entries = n * (n + 1) / 2;

  struct Partial {
    std::vector<MeanAccumulator> entries;
    std::size_t inside = 0;
  };
  std::vector<Partial> partials(kMonteCarloChunks);
  parallel_for(kMonteCarloChunks, threads, [&](std::size_t c) {
    Rng chunk_rng = rng.derive(c);
    Partial& part = partials[c];
    part.entries.resize(entries);
    Vector a;
    for (std::size_t d = 0, count = chunk_size(draws, c); d < count; ++d) {
      sample_uniform_sphere_into(n, chunk_rng, a);
      const bool inside = wedge_membership(a, wedge);
      part.inside += inside ? 1 : 0;
      std::size_t k = 0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
          part.entries[k++].add(inside ? a[static_cast<Eigen::Index>(i)] * a[static_cast<Eigen::Index>(j)] : 0.0);
        }
      }
    }
  });

  std::vector<MeanAccumulator> total(entries);
  std::size_t inside = 0;
  for (const Partial& part : partials) {
    for (std::size_t k = 0; k < entries; ++k) total[k].merge(part.entries[k]);
    inside += part.inside;
  }

  WedgeMomentEstimate out;
  out.n = n;
  out.theta = theta;
  const auto dim = static_cast<Eigen::Index>(n);
  out.mean.resize(dim, dim);
  out.std_error.resize(dim, dim);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j, ++k) {
      const MeanEstimate e = total[k].estimate();
      out.mean(i, j) = out.mean(j, i) = e.mean;
      out.std_error(i, j) = out.std_error(j, i) = e.std_error;
    }
  }
  out.analytic = uniform_wedge_moments(theta, n);
  out.lambda_max = lambda_max(SymMatrix::from_lower(out.mean));
  out.lambda_max_analytic = lambda_max_uniform(theta, n);
  out.lambda_max_std_error = out.std_error(1, 1);
  out.measure = static_cast<double>(inside) / static_cast<double>(draws);
  return out;
}

std::vector<DecrementPoint> decrement_curve(std::size_t n, const std::vector<double>& thetas,
                                            std::size_t draws, const Rng& rng, unsigned threads) {
  require_positive(draws, "draws");
  if (n < 2) throw Error(ErrorKind::kInvalidDimension, "decrement curve needs n >= 2");
  std::vector<DecrementPoint> out;
  for (std::size_t t = 0; t < thetas.size(); ++t) {
    const double theta = thetas[t];
    const double bound = decrement_bound_uniform(theta, n);
    Vector x = Vector::Zero(static_cast<Eigen::Index>(n));
    Vector z = x;
    x[0] = z[0] = std::cos(theta / 2.0);
    x[1] = std::sin(theta / 2.0);
    z[1] = -x[1];
    const Vector diff = z - x;
    const double diff2 = diff.squaredNorm();
    const Rng point_rng = rng.derive(t);

    std::vector<MeanAccumulator> partials(kMonteCarloChunks);
    parallel_for(kMonteCarloChunks, threads, [&](std::size_t c) {
      Rng chunk_rng = point_rng.derive(c);
      Vector a;
      for (std::size_t d = 0, count = chunk_size(draws, c); d < count; ++d) {
        sample_uniform_sphere_into(n, chunk_rng, a);
        const double b = std::abs(a.dot(x));
        const double inner = a.dot(z);
        const double eta = sign_of(inner) * b - inner;
        // ‖z + ηa - x‖² = ‖z - x‖² + 2η⟨a, z - x⟩ + η² for unit a
        const double after = diff2 + 2.0 * eta * a.dot(diff) + eta * eta;
        partials[c].add(after / diff2);
      }
    });
    MeanAccumulator total;
    for (const auto& p : partials) total.merge(p);
    out.push_back({theta, total.estimate(), bound});
  }
  return out;
}

std::vector<LinearBaselinePoint> linear_baseline(std::size_t n, std::size_t iterations, std::size_t runs,
                                                 const Rng& rng, unsigned threads) {
  require_positive(n, "n");
  if (runs < 2) throw Error(ErrorKind::kInvalidArgument, "linear baseline needs at least 2 runs");
  const std::size_t width = iterations + 1;
  std::vector<double> ratios(runs * width);
  const auto dim = static_cast<Eigen::Index>(n);
  parallel_for(runs, threads, [&](std::size_t r) {
    Rng run_rng = rng.derive(r);
    Vector x(dim), x0(dim);
    for (Eigen::Index i = 0; i < dim; ++i) x[i] = run_rng.normal();
    for (Eigen::Index i = 0; i < dim; ++i) x0[i] = run_rng.normal();
    const RowSelector selector(SelectionRule::kSquaredNorm, Vector::Ones(dim));
    const double e0 = (x0 - x).squaredNorm();
    Vector iterate = x0;
    ratios[r * width] = 1.0;
    for (std::size_t k = 1; k <= iterations; ++k) {
      const auto i = static_cast<Eigen::Index>(selector.draw(run_rng));
      iterate = linear_kaczmarz_step(iterate, Vector::Unit(dim, i), x[i]);
      ratios[r * width + k] = (iterate - x).squaredNorm() / e0;
    }
  });

  std::vector<LinearBaselinePoint> out(width);
  const auto count = static_cast<double>(runs);
  for (std::size_t k = 0; k < width; ++k) {
    MeanAccumulator acc;
    for (std::size_t r = 0; r < runs; ++r) acc.add(ratios[r * width + k]);
    out[k].step = k;
    out[k].ratio = acc.estimate();
    out[k].bound = std::pow(1.0 - 1.0 / static_cast<double>(n), static_cast<double>(k));
    if (k == 0) {
      out[k].step_ratio = 1.0;
      continue;
    }
    const double mx = out[k].ratio.mean;
    const double my = out[k - 1].ratio.mean;
    double vx = 0.0, vy = 0.0, cxy = 0.0;
    for (std::size_t r = 0; r < runs; ++r) {
      const double dx = ratios[r * width + k] - mx;
      const double dy = ratios[r * width + k - 1] - my;
      vx += dx * dx;
      vy += dy * dy;
      cxy += dx * dy;
    }
    vx /= count - 1.0;
    vy /= count - 1.0;
    cxy /= count - 1.0;
    const double ratio = mx / my;
    out[k].step_ratio = ratio;
    out[k].step_ratio_std_error =
        std::sqrt(std::max(0.0, (vx - 2.0 * ratio * cxy + ratio * ratio * vy) / count)) / my;
  }
  return out;
}

std::vector<EscapePoint> escape_curve(std::size_t n, const std::vector<double>& deltas, std::size_t trials,
                                      std::size_t iterations, const Rng& rng, unsigned threads) {
  std::vector<EscapePoint> out;
  for (std::size_t d = 0; d < deltas.size(); ++d) {
    const auto est = estimate_escape_probability(n, deltas[d], trials, iterations, rng.derive(d), threads);
    out.push_back({deltas[d], est.frequency, est.std_error, est.bound});
  }
  return out;
}

std::vector<RatePoint> rate_vs_n(const std::vector<std::size_t>& dims, std::size_t iterations_per_n,
                                 double delta, std::size_t trials, const Rng& rng, unsigned threads) {
  require_positive(trials, "trials");
  if (!(delta > 0.0 && delta < std::sin(kBasinAngle))) {
    throw Error(ErrorKind::kOutOfBasin, "delta must lie in (0, sin(pi/8))");
  }
  std::vector<RatePoint> out;
  for (std::size_t d = 0; d < dims.size(); ++d) {
    const std::size_t n = dims[d];
    require_positive(n, "n");
    const std::size_t iterations = iterations_per_n * n;
    std::vector<double> values(trials);
    std::vector<char> escaped(trials, 0);
    const Rng dim_rng = rng.derive(d);
    parallel_for(trials, threads, [&](std::size_t t) {
      Rng trial_rng = dim_rng.derive(t);
      const Signal signal(sample_uniform_sphere(n, trial_rng).coords());
      const Vector x0 = signal.x() + delta * sample_uniform_sphere(n, trial_rng).coords();
      const RowMeasure mu = RowMeasure::uniform_sphere(signal);
      SolverState state(x0, trial_rng);
      Vector row;
      state.observe_angle(angle_between(state.iterate(), signal.x()));
      for (std::size_t k = 0; k < iterations; ++k) {
        state.advance(mu, row);
        state.observe_angle(angle_between(state.iterate(), signal.x()));
      }
      escaped[t] = state.basin_escaped() ? 1 : 0;
      const double ratio = (state.iterate() - signal.x()).squaredNorm() / (x0 - signal.x()).squaredNorm();
      values[t] = state.basin_escaped() ? 0.0 : ratio;
    });
    MeanAccumulator acc;
    for (double v : values) acc.add(v);
    const auto escapes = static_cast<double>(std::count(escaped.begin(), escaped.end(), 1));
    out.push_back({n, iterations, acc.estimate(), escapes / static_cast<double>(trials),
                   std::pow(1.0 - alpha_sigma() / static_cast<double>(n), static_cast<double>(iterations))});
  }
  return out;
}

InitQualityPoint init_quality(std::size_t n, std::size_t m, std::size_t seeds, double threshold,
                              const Rng& rng, unsigned threads) {
  require_positive(seeds, "seeds");
  std::vector<double> errors(seeds);
  std::vector<char> ambiguous(seeds, 0);
  parallel_for(seeds, threads, [&](std::size_t s) {
    Rng seed_rng = rng.derive(s);
    const Signal signal = random_signal(n, 1.0, seed_rng);
    const MeasurementSet ms = generate_uniform_instance(n, m, signal, seed_rng);
    const InitResult init = initialize(ms);
    errors[s] = dist_to_sign_set(init.x0, signal.x()) / signal.norm();
    ambiguous[s] = init.ambiguous ? 1 : 0;
  });
  InitQualityPoint out;
  out.n = n;
  out.m = m;
  out.threshold = threshold;
  MeanAccumulator acc;
  std::size_t within = 0;
  for (double e : errors) {
    acc.add(e);
    within += e <= threshold ? 1 : 0;
  }
  out.relative_error = acc.estimate();
  out.fraction_within = static_cast<double>(within) / static_cast<double>(seeds);
  out.ambiguous = static_cast<std::size_t>(std::count(ambiguous.begin(), ambiguous.end(), 1));
  return out;
}

std::vector<SolveOutcome> end_to_end(std::size_t n, std::size_t m, std::size_t iterations, double eps,
                                     std::size_t seeds, const Rng& rng, unsigned threads) {
  require_positive(seeds, "seeds");
  if (!(eps > 0.0)) throw Error(ErrorKind::kInvalidArgument, "eps must be positive");
  std::vector<SolveOutcome> out(seeds);
  parallel_for(seeds, threads, [&](std::size_t s) {
    Rng seed_rng = rng.derive(s);
    const Signal signal = random_signal(n, 1.0, seed_rng);
    const MeasurementSet ms = generate_uniform_instance(n, m, signal, seed_rng);
    const InitResult init = initialize(ms);
    const RowMeasure mu = RowMeasure::finite(ms);
    RunOptions options;
    options.record_residual = false;
    const ConvergenceTrace trace = run(mu, init.x0, iterations, seed_rng.derive(1), nullptr, options);
    SolveOutcome& o = out[s];
    o.initial_dist = trace.records.front().dist;
    o.final_dist = trace.records.back().dist;
    o.success = o.final_dist * o.final_dist <= eps * o.initial_dist * o.initial_dist;
    o.escaped = trace.basin_escaped;
  });
  return out;
}

EnsembleStudyResult ensemble_guarantee(std::size_t n, std::size_t m, std::size_t iterations,
                                       std::size_t trials, double eps, double delta,
                                       std::size_t meta_trials, const Rng& rng, unsigned threads) {
  require_positive(meta_trials, "meta_trials");
  if (!(delta > 0.0)) throw Error(ErrorKind::kInvalidArgument, "delta must be positive");
  struct Meta {
    bool within = false;
    bool no_majority = false;
    std::size_t successes = 0;
  };
  std::vector<Meta> metas(meta_trials);
  parallel_for(meta_trials, threads, [&](std::size_t j) {
    Rng meta_rng = rng.derive(j);
    const Signal signal = random_signal(n, 1.0, meta_rng);
    const MeasurementSet ms = generate_uniform_instance(n, m, signal, meta_rng);
    const Vector x0 = signal.x() + delta * sample_uniform_sphere(n, meta_rng).coords();
    const double initial = (x0 - signal.x()).norm();
    const RowMeasure mu = RowMeasure::finite(ms);
    const auto count_successes = [&](const std::vector<Vector>& estimates) {
      std::size_t ok = 0;
      for (const Vector& e : estimates) ok += (e - signal.x()).squaredNorm() <= eps * initial * initial ? 1 : 0;
      return ok;
    };
    Meta& meta = metas[j];
    try {
      const EnsembleResult result =
          ensemble_rk(mu, x0, iterations, trials, ensemble_radius(eps, initial), meta_rng.derive(1), 1);
      meta.within = (result.estimate - signal.x()).squaredNorm() <= 9.0 * eps * initial * initial;
      meta.successes = count_successes(result.estimates);
    } catch (const NoMajorityError& e) {
      meta.no_majority = true;
      meta.successes = count_successes(e.estimates());
    }
  });
  EnsembleStudyResult out;
  out.meta_trials = meta_trials;
  out.single_trials = meta_trials * trials;
  for (const Meta& meta : metas) {
    out.within_bound += meta.within ? 1 : 0;
    out.no_majority += meta.no_majority ? 1 : 0;
    out.single_successes += meta.successes;
  }
  return out;
}

}  // namespace prk
