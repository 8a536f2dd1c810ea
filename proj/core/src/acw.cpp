#include "prk/acw.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "prk/error.hpp"
#include "prk/json_format.hpp"
#include "prk/parallel.hpp"

namespace prk {

Wedge::Wedge(UnitVector u, UnitVector v) : u_(std::move(u)), v_(std::move(v)), theta_(0.0) {
  theta_ = angle_between(u_, v_);
  if (!(theta_ > 0.0 && theta_ < std::numbers::pi)) {
    throw Error(ErrorKind::kInvalidArgument, "wedge angle must lie strictly between 0 and pi");
  }
}

bool wedge_membership(const VectorRef& w, const Wedge& wedge) {
  if (static_cast<std::size_t>(w.size()) != wedge.dim()) {
    throw Error(ErrorKind::kInvalidDimension, "vector length != wedge dimension");
  }
  return sign_of(w.dot(wedge.u().coords())) != sign_of(w.dot(wedge.v().coords()));
}

namespace {

void require_angle(double theta) {
  if (!(theta > 0.0 && theta < std::numbers::pi)) {
    throw Error(ErrorKind::kInvalidArgument, "theta must lie in (0, pi)");
  }
}

void require_wedge_dim(std::size_t n) {
  if (n < 2) throw Error(ErrorKind::kInvalidDimension, "wedges need n >= 2");
}

}  // namespace

Wedge canonical_wedge(double theta, std::size_t n) {
  require_angle(theta);
  require_wedge_dim(n);
  Vector u = Vector::Zero(static_cast<Eigen::Index>(n));
  Vector v = u;
  u[0] = v[0] = std::cos(theta / 2.0);
  u[1] = std::sin(theta / 2.0);
  v[1] = -u[1];
  return Wedge(UnitVector::normalize(u), UnitVector::normalize(v));
}

SymMatrix uniform_wedge_moments(double theta, std::size_t n) {
  require_wedge_dim(n);
  require_angle(theta);
  const double denom = static_cast<double>(n) * std::numbers::pi;
  std::vector<double> diag(n, theta / denom);
  diag[0] = (theta - std::sin(theta)) / denom;
  diag[1] = (theta + std::sin(theta)) / denom;
  return SymMatrix::diagonal(diag);
}

double lambda_max_uniform(double theta, std::size_t n) {
  require_angle(theta);
  if (n == 0) throw Error(ErrorKind::kInvalidDimension, "n must be positive");
  return (theta + std::sin(theta)) / (static_cast<double>(n) * std::numbers::pi);
}

double decrement_bound_uniform(double theta, std::size_t n) {
  if (!(theta >= 0.0 && theta < std::numbers::pi / 2.0)) {
    throw Error(ErrorKind::kInvalidArgument, "theta must lie in [0, pi/2)");
  }
  if (n == 0) throw Error(ErrorKind::kInvalidDimension, "n must be positive");
  return 1.0 - (1.0 - 4.0 * (theta + std::sin(theta)) / std::numbers::pi) / static_cast<double>(n);
}

namespace {

// Shared state for repeated wedge evaluations against one instance.
class WedgeEvaluator {
 public:
  explicit WedgeEvaluator(const MeasurementSet& ms)
      : ms_(ms), second_moment_(ms.rows().transpose() * ms.rows() / static_cast<double>(ms.m())) {
    require_wedge_dim(ms.n());
  }

  struct Value {
    double measure;
    double margin;
  };

  std::vector<std::size_t> members(const Wedge& wedge) const {
    if (wedge.dim() != ms_.n()) throw Error(ErrorKind::kInvalidDimension, "wedge dimension != n");
    const Vector pu = ms_.rows() * wedge.u().coords();
    const Vector pv = ms_.rows() * wedge.v().coords();
    std::vector<std::size_t> out;
    for (Eigen::Index i = 0; i < pu.size(); ++i) {
      if (sign_of(pu[i]) != sign_of(pv[i])) out.push_back(static_cast<std::size_t>(i));
    }
    return out;
  }

  SymMatrix wedge_matrix(const std::vector<std::size_t>& rows) const {
    SymMatrix out(ms_.n());
    const double weight = 1.0 / static_cast<double>(ms_.m());
    Vector a;
    for (std::size_t i : rows) {
      a = ms_.row(i).transpose();
      out.add_rank_one(a, weight);
    }
    return out;
  }

  Value evaluate(const Wedge& wedge) const {
    const auto rows = members(wedge);
    const SymMatrix m_wedge = wedge_matrix(rows);
    SymMatrix shifted = SymMatrix::from_lower(second_moment_);
    shifted.axpy(-4.0, m_wedge);
    return {static_cast<double>(rows.size()) / static_cast<double>(ms_.m()),
            static_cast<double>(ms_.n()) * lambda_min(shifted)};
  }

 private:
  const MeasurementSet& ms_;
  Matrix second_moment_;
};

}  // namespace

double empirical_wedge_measure(const MeasurementSet& ms, const Wedge& wedge) {
  if (wedge.dim() != ms.n()) throw Error(ErrorKind::kInvalidDimension, "wedge dimension != n");
  std::size_t count = 0;
  for (std::size_t i = 0; i < ms.m(); ++i) count += wedge_membership(ms.row(i).transpose(), wedge) ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(ms.m());
}

SymMatrix empirical_wedge_matrix(const MeasurementSet& ms, const Wedge& wedge) {
  if (wedge.dim() != ms.n()) throw Error(ErrorKind::kInvalidDimension, "wedge dimension != n");
  SymMatrix out(ms.n());
  const double weight = 1.0 / static_cast<double>(ms.m());
  Vector a;
  for (std::size_t i = 0; i < ms.m(); ++i) {
    a = ms.row(i).transpose();
    if (wedge_membership(a, wedge)) out.add_rank_one(a, weight);
  }
  return out;
}

SymMatrix empirical_second_moment(const MeasurementSet& ms) {
  return SymMatrix::from_lower(ms.rows().transpose() * ms.rows() / static_cast<double>(ms.m()));
}

double acw_margin(const MeasurementSet& ms, const Wedge& wedge) {
  SymMatrix shifted = empirical_second_moment(ms);
  shifted.axpy(-4.0, empirical_wedge_matrix(ms, wedge));
  return static_cast<double>(ms.n()) * lambda_min(shifted);
}

double acw_decrement_bound(const MeasurementSet& ms, const Wedge& wedge) {
  return 1.0 - acw_margin(ms, wedge) / static_cast<double>(ms.n());
}

Wedge sample_wedge(std::size_t n, double theta_max, Rng& rng) {
  require_wedge_dim(n);
  require_angle(theta_max);
  const UnitVector u = sample_uniform_sphere(n, rng);
  Vector tangent;
  do {
    tangent = sample_uniform_sphere(n, rng).coords();
    tangent -= tangent.dot(u.coords()) * u.coords();
  } while (tangent.norm() < 1e-8);
  tangent.normalize();
  const double phi = theta_max * (1.0 - rng.uniform());
  return Wedge(u, UnitVector::normalize(std::cos(phi) * u.coords() + std::sin(phi) * tangent));
}

namespace {

// Local search over wedges of angle <= theta_max; `score` is minimized.
Wedge refine_wedge(const Wedge& start, double theta_max, const std::function<double(const Wedge&)>& score,
                   std::size_t steps) {
  Wedge best = start;
  double best_score = score(best);
  double step = theta_max / 20.0;
  const auto n = static_cast<Eigen::Index>(start.dim());
  for (std::size_t s = 0; s < steps; ++s) {
    std::optional<Wedge> candidate_best;
    double candidate_score = best_score;
    for (int endpoint = 0; endpoint < 2; ++endpoint) {
      for (Eigen::Index j = 0; j < n; ++j) {
        for (double direction : {1.0, -1.0}) {
          Vector u = best.u().coords();
          Vector v = best.v().coords();
          (endpoint == 0 ? u : v)[j] += direction * step;
          const UnitVector uu = UnitVector::normalize(u);
          const UnitVector vv = UnitVector::normalize(v);
          const double angle = angle_between(uu, vv);
          if (!(angle > 0.0 && angle <= theta_max)) continue;
          Wedge trial(uu, vv);
          const double value = score(trial);
          if (value < candidate_score) {
            candidate_score = value;
            candidate_best = std::move(trial);
          }
        }
      }
    }
    if (candidate_best) {
      best = std::move(*candidate_best);
      best_score = candidate_score;
    } else {
      step /= 2.0;
    }
  }
  return best;
}

constexpr std::size_t kRefineSteps = 100;

}  // namespace

AcwReport audit(const MeasurementSet& ms, double theta, double alpha_target, std::size_t num_wedges,
                const Rng& rng, bool refine, unsigned threads) {
  require_angle(theta);
  if (num_wedges == 0) throw Error(ErrorKind::kInvalidArgument, "num_wedges must be >= 1");
  const WedgeEvaluator evaluator(ms);

  std::vector<Wedge> wedges;
  wedges.reserve(num_wedges);
  for (std::size_t i = 0; i < num_wedges; ++i) {
    Rng wedge_rng = rng.derive(i);
    wedges.push_back(sample_wedge(ms.n(), theta, wedge_rng));
  }
  std::vector<WedgeSample> samples(num_wedges);
  parallel_for(num_wedges, threads, [&](std::size_t i) {
    const auto value = evaluator.evaluate(wedges[i]);
    samples[i] = {wedges[i].theta(), value.measure, value.margin, false};
  });

  AcwReport report;
  report.theta = theta;
  report.alpha_target = alpha_target;
  report.wedges_tested = num_wedges;
  report.measure_bound = 2.0 * theta / std::numbers::pi;
  report.refined = refine;
  report.samples = samples;

  if (refine) {
    const auto worst_margin = static_cast<std::size_t>(
        std::min_element(samples.begin(), samples.end(),
                         [](const auto& a, const auto& b) { return a.margin < b.margin; }) -
        samples.begin());
    const auto worst_measure = static_cast<std::size_t>(
        std::max_element(samples.begin(), samples.end(),
                         [](const auto& a, const auto& b) { return a.measure < b.measure; }) -
        samples.begin());
    const std::function<double(const Wedge&)> margin_score = [&](const Wedge& w) {
      return evaluator.evaluate(w).margin;
    };
    const std::function<double(const Wedge&)> measure_score = [&](const Wedge& w) {
      return -evaluator.evaluate(w).measure;
    };
    for (const auto& [index, score] :
         {std::pair{worst_margin, margin_score}, std::pair{worst_measure, measure_score}}) {
      const Wedge refined = refine_wedge(wedges[index], theta, score, kRefineSteps);
      const auto value = evaluator.evaluate(refined);
      report.samples.push_back({refined.theta(), value.measure, value.margin, true});
    }
  }

  report.min_margin = report.samples.front().margin;
  report.max_wedge_measure = report.samples.front().measure;
  for (const auto& s : report.samples) {
    report.min_margin = std::min(report.min_margin, s.margin);
    report.max_wedge_measure = std::max(report.max_wedge_measure, s.measure);
  }
  report.pass = report.min_margin >= alpha_target && report.max_wedge_measure <= report.measure_bound;
  return report;
}

nlohmann::json acw_report_to_json(const AcwReport& report) {
  nlohmann::json doc;
  doc["kind"] = "empirical-estimate";
  doc["theta"] = report.theta;
  doc["alpha_target"] = report.alpha_target;
  doc["wedges_tested"] = report.wedges_tested;
  doc["min_margin"] = report.min_margin;
  doc["max_wedge_measure"] = report.max_wedge_measure;
  doc["measure_bound"] = report.measure_bound;
  doc["refined"] = report.refined;
  doc["pass"] = report.pass;
  return doc;
}

std::string acw_samples_csv(const AcwReport& report) {
  std::string out = "theta,mu_A,margin,refined\n";
  for (const auto& s : report.samples) {
    out += format_double(s.theta) + ',' + format_double(s.measure) + ',' + format_double(s.margin) + ',' +
           (s.refined ? "1" : "0") + '\n';
  }
  return out;
}

}  // namespace prk
