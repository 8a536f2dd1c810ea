#include "prk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "prk/error.hpp"

namespace prk {

UnitVector UnitVector::normalize(const Vector& v) {
  if (!v.allFinite()) throw Error(ErrorKind::kNumericInput, "vector has non-finite entries");
  const double norm = v.norm();
  if (norm == 0.0) throw Error(ErrorKind::kInvalidArgument, "cannot normalize the zero vector");
  return UnitVector(v / norm);
}

UnitVector UnitVector::from_unit(const Vector& v) {
  if (!v.allFinite()) throw Error(ErrorKind::kNumericInput, "vector has non-finite entries");
  if (std::abs(v.norm() - 1.0) > kNormTolerance) {
    throw Error(ErrorKind::kInvalidArgument, "vector does not have unit norm");
  }
  return UnitVector(v);
}

void sample_uniform_sphere_into(std::size_t n, Rng& rng, Vector& out) {
  if (n == 0) throw Error(ErrorKind::kInvalidDimension, "sphere dimension must be positive");
  out.resize(static_cast<Eigen::Index>(n));
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      out[i] = rng.normal();
      norm2 += out[i] * out[i];
    }
  } while (norm2 == 0.0);
  out /= std::sqrt(norm2);
}

UnitVector sample_uniform_sphere(std::size_t n, Rng& rng) {
  Vector v;
  sample_uniform_sphere_into(n, rng, v);
  return UnitVector::from_unit(v);
}

namespace {

double clamped_acos(double c) { return std::acos(std::clamp(c, -1.0, 1.0)); }

void require_same_size(const VectorRef& a, const VectorRef& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kInvalidDimension, "length mismatch: " + std::to_string(a.size()) +
                                                  " vs " + std::to_string(b.size()));
  }
}

}  // namespace

double angle_between(const UnitVector& u, const UnitVector& v) {
  require_same_size(u.coords(), v.coords());
  return clamped_acos(u.coords().dot(v.coords()));
}

double angle_between(const VectorRef& u, const VectorRef& v) {
  require_same_size(u, v);
  const double denom = u.norm() * v.norm();
  if (denom == 0.0) return 0.0;
  return clamped_acos(u.dot(v) / denom);
}

double dist_to_sign_set(const VectorRef& z, const VectorRef& x) {
  require_same_size(z, x);
  return std::sqrt(std::min((z - x).squaredNorm(), (z + x).squaredNorm()));
}

double angle_to_sign_set(const VectorRef& z, const VectorRef& x) {
  const double angle = angle_between(z, x);
  return std::min(angle, std::numbers::pi - angle);
}

SymMatrix::SymMatrix(std::size_t n) : n_(n), packed_(n * (n + 1) / 2, 0.0) {}

SymMatrix SymMatrix::from_lower(const Matrix& dense) {
  if (dense.rows() != dense.cols()) throw Error(ErrorKind::kInvalidDimension, "matrix is not square");
  SymMatrix out(static_cast<std::size_t>(dense.rows()));
  for (Eigen::Index i = 0; i < dense.rows(); ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) out.set(i, j, dense(i, j));
  }
  return out;
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& diag) {
  SymMatrix out(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) out.set(i, i, diag[i]);
  return out;
}

void SymMatrix::add_rank_one(const VectorRef& a, double weight) {
  if (static_cast<std::size_t>(a.size()) != n_) {
    throw Error(ErrorKind::kInvalidDimension, "rank-one update has wrong length");
  }
  std::size_t k = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    const double wi = weight * a[static_cast<Eigen::Index>(i)];
    for (std::size_t j = 0; j <= i; ++j) packed_[k++] += wi * a[static_cast<Eigen::Index>(j)];
  }
}

void SymMatrix::axpy(double weight, const SymMatrix& other) {
  if (other.n_ != n_) throw Error(ErrorKind::kInvalidDimension, "matrix size mismatch");
  for (std::size_t k = 0; k < packed_.size(); ++k) packed_[k] += weight * other.packed_[k];
}

void SymMatrix::scale(double factor) {
  for (double& entry : packed_) entry *= factor;
}

Matrix SymMatrix::dense() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      out(i, j) = (*this)(i, j);
      out(j, i) = out(i, j);
    }
  }
  return out;
}

double SymMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = (*this)(i, j);
      sum += (i == j ? 1.0 : 2.0) * v * v;
    }
  }
  return std::sqrt(sum);
}

double SymMatrix::trace() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < n_; ++i) sum += (*this)(i, i);
  return sum;
}

namespace {

constexpr double kJacobiTolerance = 1e-12;
constexpr int kJacobiMaxSweeps = 100;

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) sum += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(sum);
}

// A <- Jᵀ A J and V <- V J for the rotation zeroing A(p, q).
void rotate(Matrix& a, Matrix& v, Eigen::Index p, Eigen::Index q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = sign_of(tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

EigenDecomposition sym_eig(const SymMatrix& input) {
  Matrix a = input.dense();
  if (!a.allFinite()) throw Error(ErrorKind::kNumericInput, "matrix has non-finite entries");
  const Eigen::Index n = a.rows();
  Matrix v = Matrix::Identity(n, n);
  const double scale = a.norm();

  int sweeps = 0;
  while (off_diagonal_norm(a) > kJacobiTolerance * scale) {
    if (sweeps == kJacobiMaxSweeps) {
      throw Error(ErrorKind::kNumericInput, "Jacobi iteration did not converge");
    }
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) rotate(a, v, p, q);
    }
    ++sweeps;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  out.sweeps = sweeps;
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

double lambda_min(const SymMatrix& a) {
  if (a.size() == 0) throw Error(ErrorKind::kInvalidDimension, "empty matrix");
  return sym_eig(a).values[0];
}

double lambda_max(const SymMatrix& a) {
  if (a.size() == 0) throw Error(ErrorKind::kInvalidDimension, "empty matrix");
  const auto values = sym_eig(a).values;
  return values[values.size() - 1];
}

}  // namespace prk
