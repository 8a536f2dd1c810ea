#include "prk/spectral_init.hpp"

#include <algorithm>
#include <cmath>

#include "prk/error.hpp"
#include "prk/instance_io.hpp"

namespace prk {

NormScale norm_scale(const MeasurementSet& ms) {
  if (ms.m() == 0) throw Error(ErrorKind::kDegenerateInstance, "instance has no measurements");
  const double mean_sq = ms.magnitudes().squaredNorm() / static_cast<double>(ms.m());
  if (!(mean_sq > 0.0)) throw Error(ErrorKind::kDegenerateInstance, "all magnitudes are zero");
  const double raw = std::sqrt(mean_sq);
  return {raw, std::sqrt(static_cast<double>(ms.n())) * raw};
}

namespace {

double truncation_threshold(const MeasurementSet& ms) {
  if (ms.m() == 0) throw Error(ErrorKind::kDegenerateInstance, "instance has no measurements");
  return 3.0 * std::sqrt(ms.magnitudes().squaredNorm() / static_cast<double>(ms.m()));
}

// Power iteration on `y` from `v`; returns the number of steps taken.
std::size_t power_iterate(const Matrix& y, Vector& v, const InitOptions& options, bool& converged) {
  converged = false;
  Vector next(v.size());
  std::size_t steps = 0;
  while (steps < options.max_iterations) {
    next.noalias() = y * v;
    const double norm = next.norm();
    ++steps;
    if (norm == 0.0) {
      converged = true;  // v spans the null space; nothing more to learn
      break;
    }
    next /= norm;
    const double change = (next - v).norm();
    v.swap(next);
    if (change < options.tolerance) {
      converged = true;
      break;
    }
  }
  return steps;
}

}  // namespace

std::size_t truncated_count(const MeasurementSet& ms) {
  const double threshold = truncation_threshold(ms);
  std::size_t count = 0;
  for (std::size_t i = 0; i < ms.m(); ++i) count += ms.magnitude(i) <= threshold ? 1 : 0;
  return count;
}

SymMatrix build_truncated_matrix(const MeasurementSet& ms) {
  const double threshold = truncation_threshold(ms);
  const auto m = static_cast<double>(ms.m());
  SymMatrix y(ms.n());
  Vector a;
  for (std::size_t i = 0; i < ms.m(); ++i) {
    const double b = ms.magnitude(i);
    if (b <= threshold && b > 0.0) {
      a = ms.row(i).transpose();
      y.add_rank_one(a, b * b / m);
    }
  }
  return y;
}

InitResult initialize(const MeasurementSet& ms, const InitOptions& options) {
  const NormScale scale = norm_scale(ms);
  const SymMatrix y_packed = build_truncated_matrix(ms);
  const Matrix y = y_packed.dense();
  const double y_norm = y_packed.frobenius_norm();
  if (!(y_norm > 0.0)) throw Error(ErrorKind::kDegenerateInstance, "truncated matrix is zero");

  Rng start_rng(options.start_seed);
  Vector v = sample_uniform_sphere(ms.n(), start_rng).coords();

  InitResult out;
  out.iterations_used = power_iterate(y, v, options, out.converged);
  out.top_eigenvalue = v.dot(y * v);

  if (ms.n() > 1) {
    // Deflate the leading direction and estimate λ₂ for the ambiguity check.
    const Matrix deflated = y - out.top_eigenvalue * v * v.transpose();
    Vector w = sample_uniform_sphere(ms.n(), start_rng).coords();
    w -= w.dot(v) * v;
    if (w.norm() > 0.0) {
      w.normalize();
      // λ₂ only needs a Rayleigh estimate; the bulk below it is often clustered.
      InitOptions deflated_options = options;
      deflated_options.max_iterations = std::min<std::size_t>(options.max_iterations, 500);
      bool deflated_converged = false;
      power_iterate(deflated, w, deflated_options, deflated_converged);
      out.second_eigenvalue = w.dot(y * w);
    }
    const double gap = out.top_eigenvalue - out.second_eigenvalue;
    out.ambiguous = !out.converged || gap < options.gap_tolerance * y_norm;
  }

  out.lambda0 = scale.norm_estimate;
  out.lambda0_raw = scale.lambda0_raw;
  out.truncated_count = truncated_count(ms);
  out.x0 = scale.norm_estimate * v;
  return out;
}

nlohmann::json init_result_to_json(const InitResult& result) {
  nlohmann::json doc;
  doc["x0"] = vector_to_json(result.x0);
  doc["lambda0"] = result.lambda0;
  doc["lambda0_raw"] = result.lambda0_raw;
  doc["truncated_count"] = result.truncated_count;
  doc["iterations_used"] = result.iterations_used;
  doc["converged"] = result.converged;
  doc["ambiguous"] = result.ambiguous;
  doc["top_eigenvalue"] = result.top_eigenvalue;
  doc["second_eigenvalue"] = result.second_eigenvalue;
  return doc;
}

}  // namespace prk
