#include <cmath>
#include <memory>

#include <gtest/gtest.h>

#include "stats.hpp"
#include "w2bayes/errors.hpp"
#include "w2bayes/linear_model.hpp"
#include "w2bayes/sampler.hpp"

using namespace w2b;

namespace {


// y = theta* x + N(0, sigma) on n points, L2 likelihood, flat prior on [-10, 10].
struct LinearFixture {
  static constexpr std::size_t n = 50;
  TimeGrid grid = make_grid(0.0, 1.0, n);
  std::vector<double> x;
  std::vector<double> y;
  InverseProblem problem;

  explicit LinearFixture(double theta_true = 1.5, double sigma = 0.5, std::uint64_t seed = 11)
      : x(basis(grid)), y(data(x, theta_true, sigma, seed)), problem(make(grid, x, y)) {}

  static std::vector<double> basis(const TimeGrid& g) {
    std::vector<double> b;
    for (std::size_t k = 0; k < g.size(); ++k) b.push_back(1.0 + std::cos(2.0 * M_PI * g.time(k)));
    return b;
  }
  static std::vector<double> data(const std::vector<double>& x, double theta, double sigma, std::uint64_t seed) {
    Rng r(seed);
    std::vector<double> y;
    for (double xi : x) y.push_back(theta * xi + r.normal(0.0, sigma));
    return y;
  }
  static InverseProblem make(const TimeGrid& g, const std::vector<double>& x, const std::vector<double>& y) {
    auto fm = std::make_shared<LinearModel>(g, std::vector<std::vector<double>>{x});
    return InverseProblem{fm, Gather({Trace(g, y)}, {TraceLabel{}}), LikelihoodModel::gaussian_l2(n),
                          UniformBoxPrior({{-10.0, 10.0}}), GammaPrior{1.0, 0.1}};
  }

  double xx() const {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
  }
  double theta_hat() const {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += x[k] * y[k];
    return s / xx();
  }
  double residual_min() const {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += std::pow(y[k] - theta_hat() * x[k], 2);
    return s;
  }
};

ChainConfig config(std::size_t iters, std::size_t burn, std::size_t thin, std::uint64_t seed, double var = 0.02) {
  ChainConfig c;
  c.schedule = {iters, burn, thin, seed};
  const std::vector<double> v{var};
  c.proposal = ProposalSpec::diagonal(v);
  c.theta0 = {0.0};
  c.s0 = 1.0;
  return c;
}

}  // namespace

TEST(Schedule, RetainedCounts) {
  const ChainSchedule s{30000, 10000, 4, 0};
  EXPECT_EQ(s.retained_count(), 5000u);
  std::size_t kept = 0;
  for (std::size_t i = 1; i <= s.iterations; ++i) kept += s.retains(i);
  EXPECT_EQ(kept, 5000u);
  const ChainSchedule one{14, 10, 4, 0};
  EXPECT_EQ(one.retained_count(), 1u);
  EXPECT_TRUE(one.retains(14));
  EXPECT_FALSE(one.retains(10));
  EXPECT_THROW((ChainSchedule{10, 10, 1, 0}.validate()), ValidationError);
  EXPECT_THROW((ChainSchedule{10, 8, 4, 0}.validate()), ValidationError);
  EXPECT_THROW((ChainSchedule{10, 0, 0, 0}.validate()), ValidationError);
}

TEST(Gibbs, PosteriorParameters) {
  Rng r(1);
  const auto d = gibbs_update_s(GammaPrior{1.0, 0.1}, 101.0, 0.4, r);
  EXPECT_DOUBLE_EQ(d.posterior.shape, 102.0);
  EXPECT_DOUBLE_EQ(d.posterior.rate, 0.5);
  EXPECT_GT(d.s, 0.0);
  const auto p = gibbs_update_s(GammaPrior{1.0, 0.1}, 0.0, 0.0, r);
  EXPECT_DOUBLE_EQ(p.posterior.shape, 1.0);
  EXPECT_DOUBLE_EQ(p.posterior.rate, 0.1);

  std::vector<double> draws;
  for (int i = 0; i < 100000; ++i) draws.push_back(gibbs_update_s(GammaPrior{1.0, 0.1}, 101.0, 0.4, r).s);
  EXPECT_NEAR(stats::mean(draws), 204.0, 3.0 * std::sqrt(102.0 / 0.25 / 1e5));

  const auto l2 = gibbs_update_s(LikelihoodModel::gaussian_l2(50), GammaPrior{1.0, 0.1}, 3.0, r);
  EXPECT_DOUBLE_EQ(l2.posterior.shape, 26.0);
  EXPECT_DOUBLE_EQ(l2.posterior.rate, 1.6);
}

TEST(MetropolisHastings, IdenticalCandidateAlwaysAccepted) {
  LinearFixture fx;
  const std::vector<double> t{1.0};
  const auto st = evaluate_state(fx.problem, t, 3.0);
  Rng r(2);
  for (int i = 0; i < 200; ++i) {
    const auto out = mh_step_with_candidate(fx.problem, st, t, r);
    EXPECT_TRUE(out.accepted);
    EXPECT_DOUBLE_EQ(out.log_alpha, 0.0);
  }
}

TEST(MetropolisHastings, OutOfBoxCandidateRejected) {
  LinearFixture fx;
  const std::vector<double> t{9.99}, out_of_box{10.5};
  const auto st = evaluate_state(fx.problem, t, 1e-9);
  Rng a(3), b(3);
  const auto out = mh_step_with_candidate(fx.problem, st, out_of_box, a);
  EXPECT_FALSE(out.accepted);
  EXPECT_EQ(out.state.theta, st.theta);
  // Exactly one uniform consumed either way.
  b.uniform_open();
  EXPECT_EQ(a.uniform(), b.uniform());
}

TEST(MetropolisHastings, AcceptanceMatchesRatio) {
  // s chosen so the candidate's log ratio is exactly -log 2.
  LinearFixture fx;
  const std::vector<double> cur{fx.theta_hat()}, cand{fx.theta_hat() + 0.1};
  const double extra = fx.xx() * 0.01;
  const double s = 2.0 * std::log(2.0) / extra;
  const auto st = evaluate_state(fx.problem, cur, s);
  Rng r(4);
  const int n = 20000;
  int acc = 0;
  for (int i = 0; i < n; ++i) {
    const auto out = mh_step_with_candidate(fx.problem, st, cand, r);
    EXPECT_NEAR(out.log_alpha, -std::log(2.0), 1e-9);
    acc += out.accepted;
  }
  EXPECT_NEAR(static_cast<double>(acc) / n, 0.5, 3.0 * std::sqrt(0.25 / n));
}

TEST(Chain, DeterministicUnderSeed) {
  LinearFixture fx;
  const auto a = run_chain(fx.problem, config(3000, 1000, 2, 77));
  const auto b = run_chain(fx.problem, config(3000, 1000, 2, 77));
  const auto c = run_chain(fx.problem, config(3000, 1000, 2, 78));
  EXPECT_EQ(a.theta, b.theta);
  EXPECT_EQ(a.s, b.s);
  EXPECT_EQ(a.accepted_flags, b.accepted_flags);
  EXPECT_NE(a.theta, c.theta);
  EXPECT_EQ(a.size(), 1000u);
  EXPECT_EQ(a.iterations.front(), 1002u);
  EXPECT_EQ(a.attempted, 3000u);
}

TEST(Chain, CachedMisfitMatchesFreshEvaluation) {
  LinearFixture fx;
  const auto ch = run_chain(fx.problem, config(500, 100, 1, 5));
  for (std::size_t i = 0; i < ch.size(); i += 37) {
    const std::vector<double> t{ch.theta_at(i, 0)};
    const auto st = evaluate_state(fx.problem, t, ch.s[i]);
    const auto fresh = compute_misfit(fx.problem.likelihood, fx.problem.forward->simulate(t), fx.problem.observed);
    EXPECT_NEAR(st.misfit.total, fresh.total, 1e-12 * std::max(1.0, fresh.total));
  }
}

TEST(Chain, RejectsInconsistentConfiguration) {
  LinearFixture fx;
  auto c = config(3000, 1000, 2, 1);
  c.theta0 = {11.0};
  EXPECT_THROW(run_chain(fx.problem, c), ValidationError);
  c = config(3000, 1000, 2, 1);
  c.proposal.adapt_after = 2;
  EXPECT_THROW(run_chain(fx.problem, c), ValidationError);
  c.proposal.adapt_after = 1001;
  EXPECT_THROW(run_chain(fx.problem, c), ValidationError);
  c.proposal.adapt_after = 500;
  EXPECT_TRUE(run_chain(fx.problem, c).adapted);
}

TEST(Chain, LinearGaussianMatchesClosedForm) {
  // Flat prior on theta and Gamma(a, b) on the precision: theta is Student-t
  // with nu = 2a + N - 1, and s is Gamma(a + (N - 1)/2, b + S_min/2).
  LinearFixture fx;
  const auto ch = run_chain(fx.problem, config(40000, 2000, 2, 2024, 0.002));
  const double a = 1.0, b = 0.1;
  const double nu = 2.0 * a + static_cast<double>(fx.n) - 1.0;
  const double big_b = b + 0.5 * fx.residual_min();
  const double var_theta = 2.0 * big_b / (fx.xx() * (nu - 2.0));
  const double mean_s = (a + (static_cast<double>(fx.n) - 1.0) / 2.0) / big_b;

  const auto th = ch.column(0);
  const auto s = ch.column(1);
  EXPECT_NEAR(stats::mean(th), fx.theta_hat(), 4.0 * stats::batch_means_se(th));
  EXPECT_NEAR(stats::variance(th), var_theta, 0.1 * var_theta);
  EXPECT_NEAR(stats::mean(s), mean_s, 4.0 * stats::batch_means_se(s));
  EXPECT_TRUE(acceptance_healthy(ch));
}

TEST(Summary, MeanAndSampleStd) {
  Chain ch;
  ch.dim = 1;
  ch.theta = {3.0, 1.0, 2.0};
  ch.s = {1.0, 1.0, 1.0};
  const auto ps = posterior_summary(ch, 0, 4);
  EXPECT_DOUBLE_EQ(ps.mean, 2.0);
  EXPECT_DOUBLE_EQ(ps.std, 1.0);
  EXPECT_EQ(ps.histogram.counts.size(), 4u);
  EXPECT_EQ(ps.histogram.counts.front() + ps.histogram.counts.back(), 2u);
  const auto flat = posterior_summary(ch, 1, 5);
  EXPECT_DOUBLE_EQ(flat.std, 0.0);
  EXPECT_EQ(flat.histogram.counts[0], 3u);
  EXPECT_THROW(posterior_summary(Chain{}, 0), ValidationError);
}

TEST(Summary, PermutationInvariant) {
  Chain a, b;
  a.dim = b.dim = 1;
  Rng r(8);
  for (int i = 0; i < 1000; ++i) a.theta.push_back(r.normal(0.0, 1e3) + 1e-3 * r.uniform());
  a.s.assign(1000, 1.0);
  b.theta.assign(a.theta.rbegin(), a.theta.rend());
  b.s = a.s;
  EXPECT_EQ(posterior_summary(a, 0).mean, posterior_summary(b, 0).mean);
  EXPECT_EQ(posterior_summary(a, 0).std, posterior_summary(b, 0).std);
}

TEST(Health, AcceptanceBand) {
  Chain ch;
  ch.attempted = 100;
  ch.accepted = 5;
  EXPECT_FALSE(acceptance_healthy(ch));
  ch.accepted = 50;
  EXPECT_TRUE(acceptance_healthy(ch));
  ch.accepted = 95;
  EXPECT_FALSE(acceptance_healthy(ch));
}
