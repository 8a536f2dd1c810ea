#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "prk/linalg.hpp"
#include "prk/measurement.hpp"
#include "prk/rng.hpp"

namespace prk {

enum class SelectionRule { kUniform, kSquaredNorm };

std::string to_string(SelectionRule rule);
SelectionRule selection_rule_from_string(const std::string& name);

/// Row sampling distribution: uniform over rows, or proportional to ‖a_i‖².
/// For unit rows the two coincide.
class RowSelector {
 public:
  RowSelector(SelectionRule rule, const Vector& squared_norms);

  std::size_t draw(Rng& rng) const;
  double probability(std::size_t i) const;
  SelectionRule rule() const noexcept { return rule_; }
  std::size_t size() const noexcept { return cumulative_.size(); }

 private:
  SelectionRule rule_;
  std::vector<double> cumulative_;
};

/**
 * Probability measure on the sphere driving the generalized Kaczmarz step.
 *
 * Either the empirical measure over the rows of a MeasurementSet (which must
 * outlive this object), or the uniform measure σ with b = |⟨a, x⟩| computed
 * from a known signal (the unlimited-measurement oracle; synthetic only).
 */
class RowMeasure {
 public:
  static RowMeasure finite(const MeasurementSet& ms, SelectionRule rule = SelectionRule::kUniform);
  static RowMeasure uniform_sphere(Signal signal);

  bool is_finite() const noexcept { return ms_ != nullptr; }
  std::size_t dim() const noexcept;
  /// Number of rows for finite measures, 0 for the sphere oracle.
  std::size_t rows() const noexcept { return ms_ ? ms_->m() : 0; }
  const MeasurementSet* measurement_set() const noexcept { return ms_; }
  /// Known signal: the oracle's, or the instance's hidden one. May be null.
  const Signal* signal() const noexcept;
  std::string name() const;

  /// Writes the drawn row into `a` and returns its magnitude b.
  double draw(Rng& rng, Vector& a) const;

 private:
  RowMeasure() = default;
  const MeasurementSet* ms_ = nullptr;
  std::optional<RowSelector> selector_;
  std::optional<Signal> oracle_;
};

/// Projection of xk onto {y : ⟨a, y⟩ = b}. Throws kDegenerateRow for a = 0.
Vector linear_kaczmarz_step(const VectorRef& xk, const VectorRef& a, double b);

/// Closer-hyperplane step z + η a with η = sign(⟨a, z⟩) b - ⟨a, z⟩, sign(0) := +1.
Vector pr_kaczmarz_step(const VectorRef& z, const UnitVector& a, double b);

/// In-place form of pr_kaczmarz_step for unit `a`; returns η.
double apply_pr_step(Vector& z, const VectorRef& a, double b) noexcept;

/// Draws a ~ mu and applies the closer-hyperplane step.
Vector generalized_projection(const VectorRef& z, const RowMeasure& mu, Rng& rng);

struct TraceRecord {
  std::size_t step = 0;
  double dist = 0.0;      ///< dist_to_sign_set to the signal; NaN if unknown
  double angle = 0.0;     ///< angle to the closer of ±x; NaN if unknown
  double residual = 0.0;  ///< ‖|Az| - b‖₂ for finite measures; NaN otherwise
};

struct TraceConfig {
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::string selector;
  std::size_t n = 0;
  std::size_t m = 0;
};

struct ConvergenceTrace {
  TraceConfig config;
  std::vector<TraceRecord> records;  ///< K + 1 entries, step 0 first
  Vector final_iterate;
  bool basin_escaped = false;
  std::optional<std::size_t> first_escape_step;
};

/// Iterate, step counter, generator, and the realization of the basin exit time τ.
class SolverState {
 public:
  SolverState(Vector x0, Rng rng);

  const Vector& iterate() const noexcept { return iterate_; }
  std::size_t step() const noexcept { return step_; }
  const Rng& rng() const noexcept { return rng_; }
  bool basin_escaped() const noexcept { return first_escape_.has_value(); }
  std::optional<std::size_t> first_escape_step() const noexcept { return first_escape_; }

  /// One generalized projection; `row` is scratch space that receives the drawn
  /// row. Returns the drawn magnitude.
  double advance(const RowMeasure& mu, Vector& row);
  /// Records an escape at the current step if `angle` exceeds π/8. Monotone.
  void observe_angle(double angle) noexcept;

 private:
  Vector iterate_;
  std::size_t step_ = 0;
  Rng rng_;
  std::optional<std::size_t> first_escape_;
};

struct StepEvent {
  std::size_t step;         ///< index of the new iterate, >= 1
  const Vector& row;
  double magnitude;
  const Vector& iterate;
};

struct RunOptions {
  bool record_residual = true;
  std::function<void(const StepEvent&)> on_step;
};

/// K generalized projections from x0 with per-step metrics. `signal` overrides
/// the measure's known signal for metrics; both may be absent.
ConvergenceTrace run(const RowMeasure& mu, const VectorRef& x0, std::size_t iterations, Rng rng,
                     const Signal* signal = nullptr, const RunOptions& options = {});

/// Same iterates as run() without any instrumentation.
Vector run_iterate(const RowMeasure& mu, const VectorRef& x0, std::size_t iterations, Rng rng);

/// Classical randomized Kaczmarz on Ax = b (rows need not be normalized).
Vector run_linear(const RowMatrix& a, const VectorRef& b, const VectorRef& x0, std::size_t iterations,
                  Rng& rng, SelectionRule rule = SelectionRule::kSquaredNorm);

struct EscapeEstimate {
  std::size_t trials = 0;
  std::size_t escapes = 0;
  double frequency = 0.0;
  double std_error = 0.0;  ///< binomial sqrt(p(1-p)/trials)
  double bound = 0.0;      ///< (δ/sin(π/8))²
};

/**
 * Fraction of unlimited-measurement runs from ‖x0 - x‖ = δ‖x‖ whose iterates
 * ever leave the π/8 basin within K steps. Trial i draws x and the error
 * direction uniformly from rng.derive(i). Throws kOutOfBasin for δ >= sin(π/8).
 */
EscapeEstimate estimate_escape_probability(std::size_t n, double delta, std::size_t trials,
                                           std::size_t iterations, const Rng& rng, unsigned threads = 0);

}  // namespace prk
