#include "prk/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "prk/bounds.hpp"
#include "prk/error.hpp"
#include "prk/parallel.hpp"

namespace prk {

std::string to_string(SelectionRule rule) {
  return rule == SelectionRule::kUniform ? "uniform" : "squared-norm";
}

SelectionRule selection_rule_from_string(const std::string& name) {
  if (name == "uniform") return SelectionRule::kUniform;
  if (name == "squared-norm") return SelectionRule::kSquaredNorm;
  throw Error(ErrorKind::kInvalidArgument, "unknown selection rule '" + name + "'");
}

RowSelector::RowSelector(SelectionRule rule, const Vector& squared_norms) : rule_(rule) {
  const auto m = static_cast<std::size_t>(squared_norms.size());
  if (m == 0) throw Error(ErrorKind::kEmptyMeasure, "row measure has no rows");
  cumulative_.resize(m);
  if (rule == SelectionRule::kUniform) {
    for (std::size_t i = 0; i < m; ++i) cumulative_[i] = static_cast<double>(i + 1) / static_cast<double>(m);
  } else {
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double w = squared_norms[static_cast<Eigen::Index>(i)];
      if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorKind::kNumericInput, "invalid row weight");
      total += w;
      cumulative_[i] = total;
    }
    if (!(total > 0.0)) throw Error(ErrorKind::kDegenerateRow, "all rows are zero");
    for (double& c : cumulative_) c /= total;
  }
  cumulative_.back() = 1.0;
}

std::size_t RowSelector::draw(Rng& rng) const {
  if (rule_ == SelectionRule::kUniform) return rng.index(cumulative_.size());
  const double u = rng.uniform();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::min(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
}

double RowSelector::probability(std::size_t i) const {
  return i == 0 ? cumulative_[0] : cumulative_[i] - cumulative_[i - 1];
}

RowMeasure RowMeasure::finite(const MeasurementSet& ms, SelectionRule rule) {
  if (ms.m() == 0) throw Error(ErrorKind::kEmptyMeasure, "row measure has no rows");
  RowMeasure out;
  out.ms_ = &ms;
  out.selector_.emplace(rule, ms.rows().rowwise().squaredNorm());
  return out;
}

RowMeasure RowMeasure::uniform_sphere(Signal signal) {
  RowMeasure out;
  out.oracle_.emplace(std::move(signal));
  return out;
}

std::size_t RowMeasure::dim() const noexcept { return ms_ ? ms_->n() : oracle_->size(); }

const Signal* RowMeasure::signal() const noexcept {
  if (oracle_) return &*oracle_;
  if (ms_ && ms_->hidden_signal()) return &*ms_->hidden_signal();
  return nullptr;
}

std::string RowMeasure::name() const { return ms_ ? to_string(selector_->rule()) : "uniform-sphere"; }

double RowMeasure::draw(Rng& rng, Vector& a) const {
  if (ms_) {
    const std::size_t i = selector_->draw(rng);
    a = ms_->row(i).transpose();
    return ms_->magnitude(i);
  }
  sample_uniform_sphere_into(oracle_->size(), rng, a);
  return std::abs(a.dot(oracle_->x()));
}

Vector linear_kaczmarz_step(const VectorRef& xk, const VectorRef& a, double b) {
  if (xk.size() != a.size()) throw Error(ErrorKind::kInvalidDimension, "row length != iterate length");
  const double norm2 = a.squaredNorm();
  if (!(norm2 > 0.0)) throw Error(ErrorKind::kDegenerateRow, "cannot project onto a zero row");
  return xk + ((b - a.dot(xk)) / norm2) * a;
}

double apply_pr_step(Vector& z, const VectorRef& a, double b) noexcept {
  const double inner = a.dot(z);
  const double eta = sign_of(inner) * b - inner;
  z += eta * a;
  return eta;
}

Vector pr_kaczmarz_step(const VectorRef& z, const UnitVector& a, double b) {
  if (static_cast<std::size_t>(z.size()) != a.size()) {
    throw Error(ErrorKind::kInvalidDimension, "row length != iterate length");
  }
  Vector out = z;
  apply_pr_step(out, a.coords(), b);
  return out;
}

Vector generalized_projection(const VectorRef& z, const RowMeasure& mu, Rng& rng) {
  if (static_cast<std::size_t>(z.size()) != mu.dim()) {
    throw Error(ErrorKind::kInvalidDimension, "iterate length != measure dimension");
  }
  Vector a;
  const double b = mu.draw(rng, a);
  Vector out = z;
  apply_pr_step(out, a, b);
  return out;
}

SolverState::SolverState(Vector x0, Rng rng) : iterate_(std::move(x0)), rng_(rng) {}

double SolverState::advance(const RowMeasure& mu, Vector& row) {
  const double b = mu.draw(rng_, row);
  apply_pr_step(iterate_, row, b);
  ++step_;
  return b;
}

void SolverState::observe_angle(double angle) noexcept {
  if (!first_escape_ && angle > kBasinAngle) first_escape_ = step_;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_iterate(const RowMeasure& mu, const VectorRef& x0) {
  if (static_cast<std::size_t>(x0.size()) != mu.dim()) {
    throw Error(ErrorKind::kInvalidDimension, "initial iterate length != measure dimension");
  }
  if (!x0.allFinite()) throw Error(ErrorKind::kNumericInput, "initial iterate has non-finite entries");
}

}  // namespace

ConvergenceTrace run(const RowMeasure& mu, const VectorRef& x0, std::size_t iterations, Rng rng,
                     const Signal* signal, const RunOptions& options) {
  require_iterate(mu, x0);
  if (!signal) signal = mu.signal();
  if (signal && signal->size() != mu.dim()) {
    throw Error(ErrorKind::kInvalidDimension, "signal length != measure dimension");
  }

  ConvergenceTrace trace;
  trace.config = {iterations, rng.seed(), rng.stream(), mu.name(), mu.dim(), mu.rows()};
  trace.records.reserve(iterations + 1);

  SolverState state(x0, rng);
  const auto record = [&] {
    TraceRecord r{state.step(), kNaN, kNaN, kNaN};
    if (signal) {
      r.dist = dist_to_sign_set(state.iterate(), signal->x());
      r.angle = angle_to_sign_set(state.iterate(), signal->x());
      state.observe_angle(r.angle);
    }
    if (options.record_residual && mu.is_finite()) {
      r.residual = residual_vector(*mu.measurement_set(), state.iterate()).norm();
    }
    trace.records.push_back(r);
  };

  record();
  Vector row;
  for (std::size_t k = 0; k < iterations; ++k) {
    const double b = state.advance(mu, row);
    if (options.on_step) options.on_step(StepEvent{state.step(), row, b, state.iterate()});
    record();
  }
  trace.final_iterate = state.iterate();
  trace.basin_escaped = state.basin_escaped();
  trace.first_escape_step = state.first_escape_step();
  return trace;
}

Vector run_iterate(const RowMeasure& mu, const VectorRef& x0, std::size_t iterations, Rng rng) {
  require_iterate(mu, x0);
  SolverState state(x0, rng);
  Vector row;
  for (std::size_t k = 0; k < iterations; ++k) state.advance(mu, row);
  return state.iterate();
}

Vector run_linear(const RowMatrix& a, const VectorRef& b, const VectorRef& x0, std::size_t iterations,
                  Rng& rng, SelectionRule rule) {
  if (a.rows() != b.size() || a.cols() != x0.size()) {
    throw Error(ErrorKind::kInvalidDimension, "linear system dimensions do not agree");
  }
  const Vector norms2 = a.rowwise().squaredNorm();
  const RowSelector selector(rule, norms2);
  Vector x = x0;
  for (std::size_t k = 0; k < iterations; ++k) {
    const auto i = static_cast<Eigen::Index>(selector.draw(rng));
    if (!(norms2[i] > 0.0)) throw Error(ErrorKind::kDegenerateRow, "selected a zero row");
    x += ((b[i] - a.row(i).dot(x)) / norms2[i]) * a.row(i).transpose();
  }
  return x;
}

EscapeEstimate estimate_escape_probability(std::size_t n, double delta, std::size_t trials,
                                           std::size_t iterations, const Rng& rng, unsigned threads) {
  if (n == 0) throw Error(ErrorKind::kInvalidDimension, "n must be positive");
  if (trials == 0) throw Error(ErrorKind::kInvalidArgument, "trials must be positive");
  if (!(delta >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "delta must be nonnegative");
  if (delta >= std::sin(kBasinAngle)) {
    throw Error(ErrorKind::kOutOfBasin, "delta must be below sin(pi/8)");
  }
  std::vector<char> escaped(trials, 0);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng trial_rng = rng.derive(t);
    Signal signal(sample_uniform_sphere(n, trial_rng).coords());
    const Vector direction = sample_uniform_sphere(n, trial_rng).coords();
    const Vector x0 = signal.x() + delta * direction;
    const RowMeasure mu = RowMeasure::uniform_sphere(signal);
    SolverState state(x0, trial_rng);
    Vector row;
    state.observe_angle(angle_between(state.iterate(), signal.x()));
    for (std::size_t k = 0; k < iterations && !state.basin_escaped(); ++k) {
      state.advance(mu, row);
      state.observe_angle(angle_between(state.iterate(), signal.x()));
    }
    escaped[t] = state.basin_escaped() ? 1 : 0;
  });

  EscapeEstimate out;
  out.trials = trials;
  out.escapes = static_cast<std::size_t>(std::count(escaped.begin(), escaped.end(), 1));
  out.frequency = static_cast<double>(out.escapes) / static_cast<double>(trials);
  out.std_error = std::sqrt(out.frequency * (1.0 - out.frequency) / static_cast<double>(trials));
  out.bound = escape_probability_bound(delta);
  return out;
}

}  // namespace prk
