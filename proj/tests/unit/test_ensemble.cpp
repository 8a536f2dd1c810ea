#include <gtest/gtest.h>

#include <cmath>

#include "prk/ensemble.hpp"
#include "prk/measurement.hpp"

namespace {

using prk::Vector;

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

TEST(Majority, Threshold) {
  EXPECT_EQ(prk::majority_threshold(1), 1u);
  EXPECT_EQ(prk::majority_threshold(3), 2u);
  EXPECT_EQ(prk::majority_threshold(16), 8u);
}

TEST(Majority, SingleEstimateSelectsItself) {
  const auto sel = prk::select_majority({vec({1, 2})}, 1e-9);
  ASSERT_TRUE(sel);
  EXPECT_EQ(sel->index, 0u);
  EXPECT_EQ(sel->cluster_size, 1u);
}

TEST(Majority, IdenticalEstimatesSelectFirst) {
  const Vector e = vec({0.5, -0.5});
  const auto sel = prk::select_majority({e, e, e}, 1e-12);
  ASSERT_TRUE(sel);
  EXPECT_EQ(sel->index, 0u);
  EXPECT_EQ(sel->cluster_size, 3u);
}

TEST(Majority, OutlierNeverSelected) {
  // Exhaustive counting oracle: outlier first in every rotation of the list.
  const std::vector<Vector> cluster = {vec({1.0, 0.0}), vec({1.01, 0.0}), vec({1.0, 0.01}), vec({0.99, 0.0})};
  const Vector outlier = vec({10, 10});
  for (std::size_t pos = 0; pos <= cluster.size(); ++pos) {
    std::vector<Vector> estimates = cluster;
    estimates.insert(estimates.begin() + static_cast<std::ptrdiff_t>(pos), outlier);
    const auto counts = prk::ball_counts(estimates, 0.05);
    for (std::size_t i = 0; i < estimates.size(); ++i) {
      std::size_t expected = 0;
      for (const auto& other : estimates) expected += (other - estimates[i]).norm() <= 0.05;
      EXPECT_EQ(counts[i], expected);
    }
    const auto sel = prk::select_majority(estimates, 0.05);
    ASSERT_TRUE(sel);
    EXPECT_NE(sel->index, pos);
    EXPECT_GE(sel->cluster_size, 3u);
  }
}

TEST(Majority, SpreadEstimatesHaveNoMajority) {
  EXPECT_FALSE(prk::select_majority({vec({0}), vec({1}), vec({2}), vec({3})}, 0.1));
}

TEST(Ensemble, RadiusAndDefaultBound) {
  EXPECT_DOUBLE_EQ(prk::ensemble_radius(1e-4, 0.5), 2.0 * 0.01 * 0.5);
  EXPECT_NEAR(prk::default_initial_error_bound(2.0, 0.25), std::sin(M_PI / 8) * 0.5 * 2.0, 1e-15);
  EXPECT_THROW(prk::default_initial_error_bound(1.0, 0.75), prk::Error);
}

class EnsembleRun : public ::testing::Test {
 protected:
  void SetUp() override {
    prk::Rng rng(10);
    signal_ = prk::random_signal(8, 1.0, rng);
    ms_ = prk::generate_uniform_instance(8, 160, *signal_, rng);
    x0_ = signal_->x() + 0.05 * prk::sample_uniform_sphere(8, rng).coords();
  }
  std::optional<prk::Signal> signal_;
  std::optional<prk::MeasurementSet> ms_;
  Vector x0_;
};

TEST_F(EnsembleRun, SingleTrialEqualsSolve) {
  const auto mu = prk::RowMeasure::finite(*ms_);
  const prk::Rng rng(3);
  const auto result = prk::ensemble_rk(mu, x0_, 200, 1, 1e-6, rng, 1);
  EXPECT_EQ(result.estimate, prk::run_iterate(mu, x0_, 200, rng.derive(0)));
}

TEST_F(EnsembleRun, ThreadCountDoesNotChangeResult) {
  const auto mu = prk::RowMeasure::finite(*ms_);
  const auto a = prk::ensemble_rk(mu, x0_, 300, 9, 1e-3, prk::Rng(5), 1);
  const auto b = prk::ensemble_rk(mu, x0_, 300, 9, 1e-3, prk::Rng(5), 4);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.chosen_trial, b.chosen_trial);
}

TEST_F(EnsembleRun, TinyRadiusRaisesNoMajority) {
  const auto mu = prk::RowMeasure::finite(*ms_);
  try {
    prk::ensemble_rk(mu, x0_, 5, 4, 1e-15, prk::Rng(1), 1);
    FAIL();
  } catch (const prk::NoMajorityError& e) {
    EXPECT_EQ(e.kind(), prk::ErrorKind::kNoMajority);
    EXPECT_EQ(e.estimates().size(), 4u);
    for (auto c : e.ball_counts()) EXPECT_LT(c, 2u);
  }
}

}  // namespace
