#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "prk/linalg.hpp"
#include "prk/rng.hpp"

namespace prk {

/// Ground-truth vector x (nonzero) with its cached Euclidean norm.
class Signal {
 public:
  explicit Signal(Vector x);

  const Vector& x() const noexcept { return x_; }
  double norm() const noexcept { return norm_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(x_.size()); }

 private:
  Vector x_;
  double norm_;
};

struct InstanceMeta {
  std::string generator = "external";
  std::uint64_t seed = 0;
};

/**
 * Phase-retrieval instance: unit rows a_i and magnitudes b_i = |⟨a_i, x⟩|.
 *
 * Immutable once built. The constructor enforces unit rows and nonnegative
 * magnitudes (1e-12); when a hidden signal is attached every magnitude must
 * match |⟨a_i, x⟩| to 1e-12·max(1, ‖x‖).
 */
class MeasurementSet {
 public:
  static constexpr double kTolerance = 1e-12;

  MeasurementSet(RowMatrix rows, Vector magnitudes, InstanceMeta meta = {},
                 std::optional<Signal> hidden = std::nullopt);

  std::size_t n() const noexcept { return static_cast<std::size_t>(rows_.cols()); }
  std::size_t m() const noexcept { return static_cast<std::size_t>(rows_.rows()); }

  const RowMatrix& rows() const noexcept { return rows_; }
  auto row(std::size_t i) const { return rows_.row(static_cast<Eigen::Index>(i)); }
  const Vector& magnitudes() const noexcept { return magnitudes_; }
  double magnitude(std::size_t i) const { return magnitudes_[static_cast<Eigen::Index>(i)]; }
  const InstanceMeta& meta() const noexcept { return meta_; }
  const std::optional<Signal>& hidden_signal() const noexcept { return hidden_; }

  /// Same rows and magnitudes, hidden signal dropped.
  MeasurementSet without_signal() const;

 private:
  RowMatrix rows_;
  Vector magnitudes_;
  InstanceMeta meta_;
  std::optional<Signal> hidden_;
};

/// m rows i.i.d. uniform on S^{n-1}; b_i = |⟨a_i, x⟩|.
MeasurementSet generate_uniform_instance(std::size_t n, std::size_t m, const Signal& signal, Rng& rng);

/// m rows drawn i.i.d. standard Gaussian, normalized to unit length, with b
/// computed after normalization.
MeasurementSet generate_gaussian_rows(std::size_t n, std::size_t m, const Signal& signal, Rng& rng);

/// Normalizes arbitrary nonzero rows and computes the magnitudes against `signal`.
MeasurementSet instance_from_raw_rows(const RowMatrix& raw_rows, const Signal& signal,
                                      InstanceMeta meta = {});

/// Per-row |⟨a_i, z⟩| - b_i.
Vector residual_vector(const MeasurementSet& ms, const VectorRef& z);

/// Amplitude Flow loss Σ_i (|⟨a_i, z⟩| - b_i)².
double amplitude_flow_loss(const MeasurementSet& ms, const VectorRef& z);

/// Random signal with Gaussian direction and the given norm.
Signal random_signal(std::size_t n, double norm, Rng& rng);

}  // namespace prk
