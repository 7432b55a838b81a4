#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "stats.hpp"
#include "w2bayes/errors.hpp"
#include "w2bayes/priors.hpp"

using namespace w2b;

TEST(UniformBoxPrior, LogDensity) {
  const UniformBoxPrior p({{2.0, 8.0}});
  const std::vector<double> five{5.0}, out{8.5};
  EXPECT_DOUBLE_EQ(log_prior_theta(p, five), -std::log(6.0));
  EXPECT_EQ(log_prior_theta(p, out), -std::numeric_limits<double>::infinity());
  const UniformBoxPrior unit({{0.0, 1.0}, {0.0, 1.0}});
  const std::vector<double> in{0.3, 0.9};
  EXPECT_EQ(log_prior_theta(unit, in), 0.0);
  const std::vector<double> wrong{0.3};
  EXPECT_THROW(log_prior_theta(unit, wrong), ValidationError);
  EXPECT_THROW(UniformBoxPrior({{1.0, 1.0}}), ValidationError);
}

TEST(UniformBoxPrior, IntegratesToOne) {
  const UniformBoxPrior p1({{-3.0, 3.0}});
  const double i1 = stats::integrate(
      [&](double x) {
        const std::vector<double> t{x};
        return std::exp(p1.log_density(t));
      },
      -3.0, 3.0, 200);
  EXPECT_NEAR(i1, 1.0, 1e-6);
  const UniformBoxPrior p2({{-3.0, 3.0}, {2.0, 8.0}});
  const double i2 = stats::integrate(
      [&](double x) {
        return stats::integrate(
            [&](double y) {
              const std::vector<double> t{x, y};
              return std::exp(p2.log_density(t));
            },
            2.0, 8.0, 100);
      },
      -3.0, 3.0, 100);
  EXPECT_NEAR(i2, 1.0, 1e-6);
}

TEST(GammaPrior, Validation) {
  EXPECT_NO_THROW((GammaPrior{1.0, 0.1}.validate()));
  EXPECT_THROW((GammaPrior{0.0, 0.1}.validate()), ValidationError);
  EXPECT_THROW((GammaPrior{1.0, -0.1}.validate()), ValidationError);
}

TEST(Proposal, RejectsNonPositiveDefinite) {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  EXPECT_THROW(RandomWalkProposal{bad}, NumericalError);
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.1, 0.0, 1.0;
  EXPECT_THROW(RandomWalkProposal{asym}, NumericalError);
}

TEST(Proposal, ReproducibleAndCentered) {
  const std::vector<double> var{0.005, 0.005};
  const auto spec = ProposalSpec::diagonal(var);
  const RandomWalkProposal q(spec.covariance);
  const std::vector<double> theta{0.6, 3.0};
  Rng a(9), b(9);
  EXPECT_EQ(propose(theta, q, a), propose(theta, q, b));
  std::vector<double> x, y;
  Rng r(10);
  for (int i = 0; i < 100000; ++i) {
    const auto c = q.propose(theta, r);
    x.push_back(c[0]);
    y.push_back(c[1]);
  }
  const double se = std::sqrt(0.005 / 1e5);
  EXPECT_NEAR(stats::mean(x), 0.6, 4.0 * se);
  EXPECT_NEAR(stats::mean(y), 3.0, 4.0 * se);
  EXPECT_NEAR(stats::variance(x), 0.005, 0.005 * 0.02);
}

TEST(Proposal, IncrementDensityIsSymmetric) {
  Eigen::MatrixXd c(2, 2);
  c << 0.02, 0.005, 0.005, 0.01;
  const RandomWalkProposal q(c);
  const std::vector<double> d{0.03, -0.12}, md{-0.03, 0.12};
  EXPECT_DOUBLE_EQ(q.log_increment_density(d), q.log_increment_density(md));
  const std::vector<double> zero{0.0, 0.0};
  EXPECT_NEAR(q.log_increment_density(zero), -std::log(2.0 * M_PI) - 0.5 * std::log(c.determinant()), 1e-12);
}

TEST(AdaptCovariance, Examples) {
  std::vector<std::vector<double>> same(10, std::vector<double>{1.0, 2.0});
  const auto j = adapt_covariance(same, 2.38 * 2.38 / 2, 1e-6);
  EXPECT_TRUE(j.isApprox(1e-6 * Eigen::MatrixXd::Identity(2, 2)));

  Rng r(12);
  std::vector<std::vector<double>> hist;
  for (int i = 0; i < 20000; ++i) hist.push_back({r.normal(), r.normal()});
  const auto s = adapt_covariance(hist, 1.0, 0.0);
  EXPECT_NEAR(s(0, 0), 1.0, 0.05);
  EXPECT_NEAR(s(1, 1), 1.0, 0.05);
  EXPECT_NEAR(s(0, 1), 0.0, 0.05);

  std::vector<std::vector<double>> short_hist(3, std::vector<double>{0.0, 1.0});
  EXPECT_THROW(adapt_covariance(short_hist, 1.0, 1e-6), ValidationError);
  short_hist.push_back({1.0, 0.0});
  EXPECT_NO_THROW(adapt_covariance(short_hist, 1.0, 1e-6));
}

TEST(AdaptCovariance, SampleCovarianceUsesUnbiasedDenominator) {
  const std::vector<std::vector<double>> h{{1.0}, {2.0}, {3.0}};
  EXPECT_DOUBLE_EQ(sample_covariance(h)(0, 0), 1.0);
}
