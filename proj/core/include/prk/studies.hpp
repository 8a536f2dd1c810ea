#pragma once

#include <cstddef>
#include <vector>

#include "prk/linalg.hpp"
#include "prk/rng.hpp"

namespace prk {

/// Sample mean with its standard error (sample sd / sqrt(N)).
struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Streaming sum/sum-of-squares accumulator; merge() is order-sensitive, so
/// callers merge chunk results in chunk order for bitwise reproducibility.
class MeanAccumulator {
 public:
  void add(double value) noexcept {
    sum_ += value;
    sum_sq_ += value * value;
    ++count_;
  }
  void merge(const MeanAccumulator& other) noexcept {
    sum_ += other.sum_;
    sum_sq_ += other.sum_sq_;
    count_ += other.count_;
  }
  MeanEstimate estimate() const noexcept;

 private:
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  std::size_t count_ = 0;
};

/// Monte Carlo draws are split into this many fixed chunks (chunk c uses
/// rng.derive(c)), so results do not depend on the thread count.
inline constexpr std::size_t kMonteCarloChunks = 64;

struct WedgeMomentEstimate {
  std::size_t n = 0;
  double theta = 0.0;
  Matrix mean;               ///< E[a aᵀ 1_W(a)] estimate, canonical frame
  Matrix std_error;          ///< entrywise standard errors
  SymMatrix analytic;        ///< uniform_wedge_moments(θ, n)
  double lambda_max = 0.0;   ///< top eigenvalue of the symmetrized estimate
  double lambda_max_analytic = 0.0;
  double lambda_max_std_error = 0.0;  ///< standard error of the (2,2) entry
  double measure = 0.0;      ///< fraction of draws inside the wedge
};

/// Uniform-sphere Monte Carlo of the canonical wedge's second moment.
WedgeMomentEstimate wedge_moments_mc(std::size_t n, double theta, std::size_t draws, const Rng& rng,
                                     unsigned threads = 0);

struct DecrementPoint {
  double theta = 0.0;
  MeanEstimate ratio;  ///< E‖Pz - x‖² / ‖z - x‖² under the uniform measure
  double bound = 0.0;  ///< 1 - (1 - 4(θ + sinθ)/π)/n
};

/// One-step decrement at unit x, z with ‖z‖ = ‖x‖ at angle θ.
std::vector<DecrementPoint> decrement_curve(std::size_t n, const std::vector<double>& thetas,
                                            std::size_t draws, const Rng& rng, unsigned threads = 0);

struct LinearBaselinePoint {
  std::size_t step = 0;
  MeanEstimate ratio;        ///< E‖x_k - x‖² / ‖x_0 - x‖²
  double bound = 0.0;        ///< (1 - 1/n)^k, exact for the identity system
  double step_ratio = 0.0;   ///< mean_k / mean_{k-1}
  double step_ratio_std_error = 0.0;  ///< delta-method standard error
};

/// Randomized Kaczmarz on the n×n identity system, `runs` independent runs.
std::vector<LinearBaselinePoint> linear_baseline(std::size_t n, std::size_t iterations, std::size_t runs,
                                                 const Rng& rng, unsigned threads = 0);

struct EscapePoint {
  double delta = 0.0;
  double frequency = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
};

std::vector<EscapePoint> escape_curve(std::size_t n, const std::vector<double>& deltas, std::size_t trials,
                                      std::size_t iterations, const Rng& rng, unsigned threads = 0);

struct RatePoint {
  std::size_t n = 0;
  std::size_t iterations = 0;
  MeanEstimate ratio;  ///< E[‖X_K - x‖²/‖x0 - x‖² · 1{never escaped}]
  double escaped_fraction = 0.0;
  double bound = 0.0;  ///< (1 - α_σ/n)^K
};

/// Unlimited-measurement runs with K = iterations_per_n · n from relative error δ.
std::vector<RatePoint> rate_vs_n(const std::vector<std::size_t>& dims, std::size_t iterations_per_n,
                                 double delta, std::size_t trials, const Rng& rng, unsigned threads = 0);

struct InitQualityPoint {
  std::size_t n = 0;
  std::size_t m = 0;
  MeanEstimate relative_error;  ///< dist_to_sign_set(x0, x) / ‖x‖
  double fraction_within = 0.0;
  double threshold = 0.0;
  std::size_t ambiguous = 0;
};

InitQualityPoint init_quality(std::size_t n, std::size_t m, std::size_t seeds, double threshold,
                              const Rng& rng, unsigned threads = 0);

struct SolveOutcome {
  double initial_dist = 0.0;
  double final_dist = 0.0;
  bool success = false;  ///< final² <= ε · initial²
  bool escaped = false;
};

/// Spectral init followed by K Kaczmarz steps on a fresh uniform instance per
/// seed (seed i from rng.derive(i)), signal of unit norm.
std::vector<SolveOutcome> end_to_end(std::size_t n, std::size_t m, std::size_t iterations, double eps,
                                     std::size_t seeds, const Rng& rng, unsigned threads = 0);

struct EnsembleStudyResult {
  std::size_t meta_trials = 0;
  std::size_t within_bound = 0;  ///< ‖x̂ - x‖² <= 9ε‖x0 - x‖²
  std::size_t no_majority = 0;
  std::size_t single_trials = 0;
  std::size_t single_successes = 0;  ///< individual runs with ‖x_K - x‖² <= ε‖x0 - x‖²
  double single_success_rate() const noexcept {
    return single_trials ? static_cast<double>(single_successes) / static_cast<double>(single_trials) : 0.0;
  }
};

/// Ensemble guarantee experiment. Each meta-trial draws a unit signal, an
/// (n, m) uniform instance and x0 = x + δ·u, then runs the ensemble with
/// radius 2√ε·‖x0 - x‖.
EnsembleStudyResult ensemble_guarantee(std::size_t n, std::size_t m, std::size_t iterations,
                                       std::size_t trials, double eps, double delta,
                                       std::size_t meta_trials, const Rng& rng, unsigned threads = 0);

}  // namespace prk
