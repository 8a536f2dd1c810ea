#include "prk/bounds.hpp"

#include <cmath>
#include <numbers>

#include "prk/error.hpp"

namespace prk {

double alpha_sigma() noexcept { return 0.5 - 4.0 * std::sin(kBasinAngle) / std::numbers::pi; }

double escape_probability_bound(double delta) {
  if (!(delta >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "delta must be nonnegative");
  const double ratio = delta / std::sin(kBasinAngle);
  return ratio * ratio;
}

namespace {

void require_probabilities(double eps, double delta2) {
  if (!(eps > 0.0)) throw Error(ErrorKind::kInvalidArgument, "eps must be positive");
  if (!(delta2 > 0.0 && delta2 <= 1.0)) throw Error(ErrorKind::kInvalidArgument, "delta2 must lie in (0, 1]");
}

}  // namespace

std::size_t theorem_iterations(double eps, double delta2, std::size_t n) {
  require_probabilities(eps, delta2);
  const double k = 2.0 * (std::log(1.0 / eps) + std::log(2.0 / delta2)) * static_cast<double>(n);
  return static_cast<std::size_t>(std::ceil(std::max(k, 0.0)));
}

double corollary_iterations(double eps, double delta2, std::size_t n) {
  require_probabilities(eps, delta2);
  return (std::log(2.0 / eps) + std::log(1.0 / delta2)) * static_cast<double>(n) / alpha_sigma();
}

double linear_rate_bound(double condition_number, std::size_t k) {
  if (!(condition_number >= 1.0)) throw Error(ErrorKind::kInvalidArgument, "condition number must be >= 1");
  return std::pow(1.0 - 1.0 / (condition_number * condition_number), static_cast<double>(k));
}

}  // namespace prk
