#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prk/linalg.hpp"
#include "prk/measurement.hpp"
#include "prk/rng.hpp"

namespace prk {

/// Spherical wedge W_{u,v} = {w : sign⟨w,u⟩ ≠ sign⟨w,v⟩}, sign(0) := +1.
class Wedge {
 public:
  /// Throws kInvalidArgument unless the angle between u and v lies in (0, π).
  Wedge(UnitVector u, UnitVector v);

  const UnitVector& u() const noexcept { return u_; }
  const UnitVector& v() const noexcept { return v_; }
  double theta() const noexcept { return theta_; }
  std::size_t dim() const noexcept { return u_.size(); }

 private:
  UnitVector u_;
  UnitVector v_;
  double theta_;
};

bool wedge_membership(const VectorRef& w, const Wedge& wedge);

/// Wedge of angle θ in the (e1, e2) plane, bisected by e1.
Wedge canonical_wedge(double theta, std::size_t n);

/// Second moment E[a aᵀ 1_W(a)] under the uniform sphere measure for the
/// canonical wedge: diag((θ - sinθ)/nπ, (θ + sinθ)/nπ, θ/nπ, ..., θ/nπ).
SymMatrix uniform_wedge_moments(double theta, std::size_t n);

/// (θ + sinθ)/nπ, the top eigenvalue of uniform_wedge_moments.
double lambda_max_uniform(double theta, std::size_t n);

/// 1 - (1 - 4(θ + sinθ)/π)/n: expected one-step squared-error ratio bound
/// under the uniform measure at angle θ < π/2.
double decrement_bound_uniform(double theta, std::size_t n);

/// μ_A(W): fraction of rows inside the wedge.
double empirical_wedge_measure(const MeasurementSet& ms, const Wedge& wedge);

/// (1/m) Σ_i a_i a_iᵀ 1_W(a_i).
SymMatrix empirical_wedge_matrix(const MeasurementSet& ms, const Wedge& wedge);

/// (1/m) Σ_i a_i a_iᵀ.
SymMatrix empirical_second_moment(const MeasurementSet& ms);

/// n · λ_min((1/m)AᵀA - 4·empirical_wedge_matrix); ACW(θ, α) holds on this
/// wedge iff the margin is at least α.
double acw_margin(const MeasurementSet& ms, const Wedge& wedge);

/// 1 - margin/n: the one-step expected squared-error ratio bound for the
/// empirical row measure at any z whose wedge with x is `wedge`.
double acw_decrement_bound(const MeasurementSet& ms, const Wedge& wedge);

/// u uniform on the sphere, v at angle θ_max·(1 - U) ∈ (0, θ_max] from u in a
/// uniformly random 2-plane through u. For a fixed generator state the wedges
/// are nested in θ_max.
Wedge sample_wedge(std::size_t n, double theta_max, Rng& rng);

struct WedgeSample {
  double theta = 0.0;
  double measure = 0.0;
  double margin = 0.0;
  bool refined = false;
};

/// Empirical ACW estimate over a sampled wedge family. Never a certificate:
/// the supremum over all wedges is not computed.
struct AcwReport {
  double theta = 0.0;
  double alpha_target = 0.5;
  std::size_t wedges_tested = 0;
  double min_margin = 0.0;
  double max_wedge_measure = 0.0;
  double measure_bound = 0.0;  ///< 2θ/π
  bool refined = false;
  bool pass = false;
  std::vector<WedgeSample> samples;  ///< sampled wedges, then refined ones
};

/**
 * Samples `num_wedges` wedges of angle <= θ (wedge i from rng.derive(i)) and
 * records μ_A and the ACW margin of each. With `refine`, the worst-margin and
 * the largest-measure wedges are each improved by coordinate-wise angular
 * perturbations (100 steps, step θ/20 halved when no candidate improves).
 * pass = min_margin >= alpha_target and max_wedge_measure <= 2θ/π.
 */
AcwReport audit(const MeasurementSet& ms, double theta, double alpha_target, std::size_t num_wedges,
                const Rng& rng, bool refine, unsigned threads = 0);

nlohmann::json acw_report_to_json(const AcwReport& report);

/// Per-wedge CSV: header `theta,mu_A,margin,refined`.
std::string acw_samples_csv(const AcwReport& report);

}  // namespace prk
