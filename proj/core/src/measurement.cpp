#include "prk/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "prk/error.hpp"

namespace prk {

Signal::Signal(Vector x) : x_(std::move(x)), norm_(0.0) {
  if (x_.size() == 0) throw Error(ErrorKind::kInvalidDimension, "signal must have positive length");
  if (!x_.allFinite()) throw Error(ErrorKind::kNumericInput, "signal has non-finite entries");
  norm_ = x_.norm();
  if (norm_ == 0.0) throw Error(ErrorKind::kInvalidSignal, "signal must be nonzero");
}

MeasurementSet::MeasurementSet(RowMatrix rows, Vector magnitudes, InstanceMeta meta,
                               std::optional<Signal> hidden)
    : rows_(std::move(rows)), magnitudes_(std::move(magnitudes)), meta_(std::move(meta)),
      hidden_(std::move(hidden)) {
  if (rows_.cols() == 0) throw Error(ErrorKind::kInvalidDimension, "rows must have n >= 1");
  if (rows_.rows() != magnitudes_.size()) {
    throw Error(ErrorKind::kInvalidDimension, "row count " + std::to_string(rows_.rows()) +
                                                  " != magnitude count " +
                                                  std::to_string(magnitudes_.size()));
  }
  if (!rows_.allFinite() || !magnitudes_.allFinite()) {
    throw Error(ErrorKind::kNumericInput, "instance has non-finite entries");
  }
  for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
    if (std::abs(rows_.row(i).norm() - 1.0) > kTolerance) {
      throw Error(ErrorKind::kInvalidArgument, "row " + std::to_string(i) + " is not unit norm");
    }
    if (magnitudes_[i] < 0.0) {
      throw Error(ErrorKind::kInvalidArgument, "magnitude " + std::to_string(i) + " is negative");
    }
  }
  if (hidden_) {
    if (hidden_->size() != n()) {
      throw Error(ErrorKind::kInvalidDimension, "hidden signal length does not match rows");
    }
    const double tol = kTolerance * std::max(1.0, hidden_->norm());
    const Vector expected = (rows_ * hidden_->x()).cwiseAbs();
    for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
      if (std::abs(expected[i] - magnitudes_[i]) > tol) {
        throw Error(ErrorKind::kInvalidArgument,
                    "magnitude " + std::to_string(i) + " disagrees with the hidden signal");
      }
    }
  }
}

MeasurementSet MeasurementSet::without_signal() const {
  return MeasurementSet(rows_, magnitudes_, meta_, std::nullopt);
}

namespace {

void require_dims(std::size_t n, std::size_t m, const Signal& signal) {
  if (n == 0 || m == 0) throw Error(ErrorKind::kInvalidDimension, "n and m must be positive");
  if (signal.size() != n) throw Error(ErrorKind::kInvalidDimension, "signal length != n");
}

}  // namespace

MeasurementSet generate_uniform_instance(std::size_t n, std::size_t m, const Signal& signal, Rng& rng) {
  require_dims(n, m, signal);
  RowMatrix rows(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  Vector a;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    sample_uniform_sphere_into(n, rng, a);
    rows.row(i) = a.transpose();
  }
  Vector b = (rows * signal.x()).cwiseAbs();
  return MeasurementSet(std::move(rows), std::move(b), {"uniform", rng.seed()}, signal);
}

MeasurementSet instance_from_raw_rows(const RowMatrix& raw_rows, const Signal& signal, InstanceMeta meta) {
  require_dims(static_cast<std::size_t>(raw_rows.cols()), static_cast<std::size_t>(raw_rows.rows()),
               signal);
  RowMatrix rows(raw_rows.rows(), raw_rows.cols());
  for (Eigen::Index i = 0; i < raw_rows.rows(); ++i) {
    const double norm = raw_rows.row(i).norm();
    if (!(norm > 0.0)) throw Error(ErrorKind::kDegenerateRow, "row " + std::to_string(i) + " is zero");
    rows.row(i) = raw_rows.row(i) / norm;
  }
  Vector b = (rows * signal.x()).cwiseAbs();
  return MeasurementSet(std::move(rows), std::move(b), std::move(meta), signal);
}

MeasurementSet generate_gaussian_rows(std::size_t n, std::size_t m, const Signal& signal, Rng& rng) {
  require_dims(n, m, signal);
  RowMatrix raw(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    do {
      for (Eigen::Index j = 0; j < raw.cols(); ++j) raw(i, j) = rng.normal();
    } while (raw.row(i).squaredNorm() == 0.0);
  }
  return instance_from_raw_rows(raw, signal, {"gaussian", rng.seed()});
}

Vector residual_vector(const MeasurementSet& ms, const VectorRef& z) {
  if (static_cast<std::size_t>(z.size()) != ms.n()) {
    throw Error(ErrorKind::kInvalidDimension, "iterate length does not match instance dimension");
  }
  return (ms.rows() * z).cwiseAbs() - ms.magnitudes();
}

double amplitude_flow_loss(const MeasurementSet& ms, const VectorRef& z) {
  return residual_vector(ms, z).squaredNorm();
}

Signal random_signal(std::size_t n, double norm, Rng& rng) {
  if (!(norm > 0.0)) throw Error(ErrorKind::kInvalidSignal, "signal norm must be positive");
  return Signal(sample_uniform_sphere(n, rng).coords() * norm);
}

}  // namespace prk
