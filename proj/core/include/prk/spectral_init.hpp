#pragma once

#include <cstddef>
#include <cstdint>

#include <nlohmann/json.hpp>

#include "prk/linalg.hpp"
#include "prk/measurement.hpp"

namespace prk {

struct NormScale {
  double lambda0_raw = 0.0;    ///< sqrt(mean b_i²)
  double norm_estimate = 0.0;  ///< sqrt(n)·lambda0_raw, the estimate of ‖x‖ for unit rows
};

/// Throws kDegenerateInstance when every magnitude is zero.
NormScale norm_scale(const MeasurementSet& ms);

/// Rows kept by the truncation b_i <= 3·lambda0_raw (ties kept).
std::size_t truncated_count(const MeasurementSet& ms);

/// Y = (1/m) Σ_{b_i <= 3λ₀} b_i² a_i a_iᵀ. Positive semidefinite.
SymMatrix build_truncated_matrix(const MeasurementSet& ms);

struct InitOptions {
  double tolerance = 1e-10;          ///< stop when ‖v_{t+1} - v_t‖ < tolerance
  std::size_t max_iterations = 10000;
  std::uint64_t start_seed = 0x5eed;  ///< seed of the power-iteration start vector
  /// Relative top-two eigenvalue gap (vs ‖Y‖_F) under which the leading
  /// eigenvector is reported as ambiguous.
  double gap_tolerance = 1e-12;
};

struct InitResult {
  Vector x0;                        ///< norm_estimate · v, ‖x0‖ = lambda0
  double lambda0 = 0.0;             ///< norm estimate
  double lambda0_raw = 0.0;
  std::size_t truncated_count = 0;
  std::size_t iterations_used = 0;  ///< power-method steps for the leading vector
  bool converged = false;
  bool ambiguous = false;           ///< top two eigenvalues numerically equal
  double top_eigenvalue = 0.0;
  double second_eigenvalue = 0.0;   ///< estimate from deflated power iteration
};

/// Truncated spectral initialization. The sign of x0 is whatever power
/// iteration converges to; compare against ±x.
InitResult initialize(const MeasurementSet& ms, const InitOptions& options = {});

/// {x0, lambda0, truncated_count} plus diagnostics.
nlohmann::json init_result_to_json(const InitResult& result);

}  // namespace prk
