#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "prk/rng.hpp"

namespace prk {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using VectorRef = Eigen::Ref<const Vector>;

/// Sign with the convention sign(0) := +1, shared by every update and wedge test.
inline double sign_of(double value) noexcept { return value >= 0.0 ? 1.0 : -1.0; }

/// A vector of unit Euclidean length, |‖v‖ - 1| <= 1e-12.
class UnitVector {
 public:
  static constexpr double kNormTolerance = 1e-12;

  /// Scales `v` to unit length. Throws on zero or non-finite input.
  static UnitVector normalize(const Vector& v);
  /// Accepts `v` as is if it already has unit norm within tolerance;
  /// otherwise throws.
  static UnitVector from_unit(const Vector& v);

  const Vector& coords() const noexcept { return coords_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(coords_.size()); }
  double operator[](std::size_t i) const { return coords_[static_cast<Eigen::Index>(i)]; }

  UnitVector operator-() const { return UnitVector(-coords_); }

 private:
  explicit UnitVector(Vector coords) : coords_(std::move(coords)) {}
  Vector coords_;
};

UnitVector sample_uniform_sphere(std::size_t n, Rng& rng);

/// Writes a uniform sphere draw into `out` (resized to n); allocation-free in
/// hot loops once `out` has the right size.
void sample_uniform_sphere_into(std::size_t n, Rng& rng, Vector& out);

/// arccos of the inner product clamped to [-1, 1].
double angle_between(const UnitVector& u, const UnitVector& v);
/// Angle between arbitrary nonzero vectors; returns 0 if either is zero.
double angle_between(const VectorRef& u, const VectorRef& v);

/// min(‖z - x‖, ‖z + x‖): distance to the solution set {x, -x}.
double dist_to_sign_set(const VectorRef& z, const VectorRef& x);

/// Angle between z and the closer of {x, -x}, in [0, π/2].
double angle_to_sign_set(const VectorRef& z, const VectorRef& x);

/// Symmetric n×n matrix holding only the lower triangle (packed row-wise), so
/// entry (i, j) and (j, i) are the same stored value.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n);

  /// Builds from the lower triangle of `dense`; the upper triangle is ignored.
  static SymMatrix from_lower(const Matrix& dense);
  static SymMatrix diagonal(const std::vector<double>& diag);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return packed_[offset(i, j)];
  }
  void set(std::size_t i, std::size_t j, double value) noexcept { packed_[offset(i, j)] = value; }
  void add(std::size_t i, std::size_t j, double value) noexcept { packed_[offset(i, j)] += value; }

  /// this += weight * a aᵀ
  void add_rank_one(const VectorRef& a, double weight);
  /// this += weight * other
  void axpy(double weight, const SymMatrix& other);
  void scale(double factor);

  Matrix dense() const;
  double frobenius_norm() const;
  double trace() const;

 private:
  static std::size_t offset(std::size_t i, std::size_t j) noexcept {
    if (i < j) std::swap(i, j);
    return i * (i + 1) / 2 + j;
  }

  std::size_t n_ = 0;
  std::vector<double> packed_;
};

struct EigenDecomposition {
  Vector values;   ///< ascending
  Matrix vectors;  ///< column k pairs with values[k]; orthonormal
  int sweeps = 0;
};

/**
 * Dense symmetric eigendecomposition by cyclic Jacobi rotations.
 *
 * Sweeps until the off-diagonal Frobenius norm falls below 1e-12·‖A‖_F, at most
 * 100 sweeps. Throws ErrorKind::kNumericInput on non-finite entries.
 */
EigenDecomposition sym_eig(const SymMatrix& a);

/// Smallest eigenvalue; shorthand over sym_eig.
double lambda_min(const SymMatrix& a);
/// Largest eigenvalue; shorthand over sym_eig.
double lambda_max(const SymMatrix& a);

}  // namespace prk
