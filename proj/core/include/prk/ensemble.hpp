#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "prk/error.hpp"
#include "prk/solver.hpp"

namespace prk {

/// ⌈L/2⌉: the number of estimates a ball must contain to be a majority.
constexpr std::size_t majority_threshold(std::size_t trials) noexcept { return (trials + 1) / 2; }

struct MajoritySelection {
  std::size_t index = 0;
  std::size_t cluster_size = 0;  ///< estimates in the closed ball, itself included
};

/// First estimate whose closed ball of `radius` holds at least ⌈L/2⌉ estimates.
std::optional<MajoritySelection> select_majority(const std::vector<Vector>& estimates, double radius);

/// Ball sizes around every estimate, in trial order.
std::vector<std::size_t> ball_counts(const std::vector<Vector>& estimates, double radius);

/// Raised when no estimate gathers a majority ball; carries the per-trial
/// estimates and ball sizes so callers can report or retry with larger L or radius.
class NoMajorityError : public Error {
 public:
  NoMajorityError(std::vector<Vector> estimates, std::vector<std::size_t> counts, double radius);

  const std::vector<Vector>& estimates() const noexcept { return estimates_; }
  const std::vector<std::size_t>& ball_counts() const noexcept { return counts_; }
  double radius() const noexcept { return radius_; }

 private:
  std::vector<Vector> estimates_;
  std::vector<std::size_t> counts_;
  double radius_;
};

struct EnsembleResult {
  Vector estimate;
  std::size_t chosen_trial = 0;
  std::size_t cluster_size = 0;
  double radius = 0.0;
  std::vector<Vector> estimates;  ///< x_K of every trial, in trial order
};

/// 2√ε·ρ, where ρ bounds ‖x0 - x‖.
double ensemble_radius(double eps, double rho);

/// sin(π/8)·√δ₁·λ̂: the initial-error bound assumed by the ensemble guarantee,
/// with λ̂ the spectral norm estimate.
double default_initial_error_bound(double norm_estimate, double delta1);

/**
 * Ensemble randomized Kaczmarz: L independent K-step runs from x0, trial l on
 * stream rng.derive(l), followed by majority-ball selection. Throws
 * NoMajorityError when no trial qualifies.
 */
EnsembleResult ensemble_rk(const RowMeasure& mu, const VectorRef& x0, std::size_t iterations,
                           std::size_t trials, double radius, const Rng& rng, unsigned threads = 0);

}  // namespace prk
