#pragma once

#include <cstddef>

namespace prk {

/// Half-angle of the basin of linear convergence: points within π/8 of the signal.
inline constexpr double kBasinAngle = 0.39269908169872415480783042290994;  // π/8

/// α_σ = 1/2 - 4 sin(π/8)/π, the uniform-measure contraction constant.
double alpha_sigma() noexcept;

/// (δ / sin(π/8))², the bound on the probability of ever leaving the basin
/// when starting at relative error δ under unlimited uniform measurements.
double escape_probability_bound(double delta);

/// ⌈2 (ln(1/ε) + ln(2/δ₂)) n⌉, the iteration count of the end-to-end guarantee.
std::size_t theorem_iterations(double eps, double delta2, std::size_t n);

/// (ln(2/ε) + ln(1/δ₂)) n / α_σ, the iteration count of the unlimited-measurement
/// corollary. Differs from theorem_iterations by constant bookkeeping only.
double corollary_iterations(double eps, double delta2, std::size_t n);

/// (1 - 1/κ²)^k: expected squared-error ratio bound for linear randomized Kaczmarz.
double linear_rate_bound(double condition_number, std::size_t k);

}  // namespace prk
