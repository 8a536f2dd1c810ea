#include "prk/ensemble.hpp"

#include <cmath>
#include <string>

#include "prk/bounds.hpp"
#include "prk/parallel.hpp"

namespace prk {

std::vector<std::size_t> ball_counts(const std::vector<Vector>& estimates, double radius) {
  const double radius2 = radius * radius;
  std::vector<std::size_t> counts(estimates.size(), 0);
  for (std::size_t l = 0; l < estimates.size(); ++l) {
    for (const Vector& other : estimates) {
      if ((estimates[l] - other).squaredNorm() <= radius2) ++counts[l];
    }
  }
  return counts;
}

std::optional<MajoritySelection> select_majority(const std::vector<Vector>& estimates, double radius) {
  if (!(radius >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "radius must be nonnegative");
  const std::size_t need = majority_threshold(estimates.size());
  const auto counts = ball_counts(estimates, radius);
  for (std::size_t l = 0; l < counts.size(); ++l) {
    if (counts[l] >= need) return MajoritySelection{l, counts[l]};
  }
  return std::nullopt;
}

NoMajorityError::NoMajorityError(std::vector<Vector> estimates, std::vector<std::size_t> counts,
                                 double radius)
    : Error(ErrorKind::kNoMajority, "no estimate has " + std::to_string(majority_threshold(estimates.size())) +
                                        " of " + std::to_string(estimates.size()) +
                                        " estimates within the selection radius"),
      estimates_(std::move(estimates)),
      counts_(std::move(counts)),
      radius_(radius) {}

double ensemble_radius(double eps, double rho) {
  if (!(eps > 0.0)) throw Error(ErrorKind::kInvalidArgument, "eps must be positive");
  if (!(rho > 0.0)) throw Error(ErrorKind::kInvalidArgument, "rho must be positive");
  return 2.0 * std::sqrt(eps) * rho;
}

double default_initial_error_bound(double norm_estimate, double delta1) {
  if (!(delta1 > 0.0 && delta1 <= 0.5)) throw Error(ErrorKind::kInvalidArgument, "delta1 must lie in (0, 1/2]");
  return std::sin(kBasinAngle) * std::sqrt(delta1) * norm_estimate;
}

EnsembleResult ensemble_rk(const RowMeasure& mu, const VectorRef& x0, std::size_t iterations,
                           std::size_t trials, double radius, const Rng& rng, unsigned threads) {
  if (trials == 0) throw Error(ErrorKind::kInvalidArgument, "trial count L must be >= 1");
  if (!(radius > 0.0)) throw Error(ErrorKind::kInvalidArgument, "radius must be positive");
  std::vector<Vector> estimates(trials);
  const Vector start = x0;
  parallel_for(trials, threads, [&](std::size_t l) {
    estimates[l] = run_iterate(mu, start, iterations, rng.derive(l));
  });

  const auto chosen = select_majority(estimates, radius);
  if (!chosen) {
    auto counts = ball_counts(estimates, radius);
    throw NoMajorityError(std::move(estimates), std::move(counts), radius);
  }
  EnsembleResult out;
  out.estimate = estimates[chosen->index];
  out.chosen_trial = chosen->index;
  out.cluster_size = chosen->cluster_size;
  out.radius = radius;
  out.estimates = std::move(estimates);
  return out;
}

}  // namespace prk
