#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "w2bayes/errors.hpp"
#include "w2bayes/transport.hpp"
#include "oracles.hpp"

using namespace w2b;

namespace {

Trace tr(std::vector<double> v, double t0 = 0.0, double dt = 1.0) {
  const auto n = v.size();
  return Trace(TimeGrid(t0, dt, n), std::move(v));
}

}  // namespace

TEST(Scaling, Examples) {
  const auto lin = apply_scaling(tr({-1, 0, 1}), LinearScaling{2.0});
  EXPECT_EQ(std::vector<double>(lin.values().begin(), lin.values().end()), (std::vector<double>{1, 2, 3}));
  const auto sq = apply_scaling(tr({-2, 3}), SquareScaling{});
  EXPECT_EQ(sq[0], 4.0);
  EXPECT_EQ(sq[1], 9.0);
  const auto le = apply_scaling(tr({-1, 2}), LinearExponentialScaling{1.0});
  EXPECT_DOUBLE_EQ(le[0], std::exp(-1.0));
  EXPECT_DOUBLE_EQ(le[1], 3.0);
  const auto ab = apply_scaling(tr({-1.5, 2}), AbsoluteScaling{});
  EXPECT_EQ(ab[0], 1.5);
  const auto ex = apply_scaling(tr({0.0, 1.0}), ExponentialScaling{2.0});
  EXPECT_DOUBLE_EQ(ex[1], std::exp(2.0));
}

TEST(Scaling, Errors) {
  EXPECT_THROW(apply_scaling(tr({-1, 0}), LinearScaling{1.0}), ValidationError);
  EXPECT_THROW(apply_scaling(tr({-1, 0}), LinearScaling{}), ValidationError);
  EXPECT_THROW(apply_scaling(tr({701, 0}), ExponentialScaling{1.0}), NumericalError);
  EXPECT_NO_THROW(apply_scaling(tr({700, 0}), ExponentialScaling{1.0}));
  EXPECT_THROW(apply_scaling(tr({1, 0}), ExponentialScaling{0.0}), ValidationError);
  EXPECT_THROW(apply_scaling(tr({1, 0}), LinearExponentialScaling{-1.0}), ValidationError);
}

TEST(AutoShift, Examples) {
  EXPECT_DOUBLE_EQ(auto_shift_constant(tr({-0.3, 1}), tr({0.1, 2}), 0.01), 0.31);
  EXPECT_DOUBLE_EQ(auto_shift_constant(tr({0.2, 1}), tr({0.1, 2}), 0.01), 0.01);
  EXPECT_DOUBLE_EQ(auto_shift_constant(tr({0, 0}), tr({0, 0}), 1.0), 1.0);
  EXPECT_THROW(auto_shift_constant(tr({0, 0}), tr({0, 0}), 0.0), ValidationError);
}

TEST(Normalize, Examples) {
  auto d = normalize(tr({1, 3}));
  EXPECT_DOUBLE_EQ(d.weights()[0], 0.25);
  EXPECT_DOUBLE_EQ(d.cdf()[1], 1.0);
  d = normalize(tr({2, 2, 2, 2, 2}));
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_DOUBLE_EQ(d.weights()[i], 0.2);
    EXPECT_NEAR(d.cdf()[i], 0.2 * static_cast<double>(i + 1), 1e-15);
  }
  d = normalize(tr({0, 2, 0, 2}));
  EXPECT_EQ(std::vector<double>(d.cdf().begin(), d.cdf().end()), (std::vector<double>{0, 0.5, 0.5, 1.0}));
}

TEST(Normalize, Errors) {
  EXPECT_THROW(normalize(tr({0, 0, 0})), NumericalError);
  EXPECT_THROW(normalize(tr({1, -1e-300, 2})), ValidationError);
}

TEST(InverseCdf, AnchorsAndConvention) {
  const auto u = normalize(tr({1, 1}));
  EXPECT_EQ(inverse_cdf(u, 0.0), 0.0);
  EXPECT_EQ(inverse_cdf(u, 1.0), 1.0);
  // The anchor (0, t_1) and the knot (0.5, t_1) give a flat first piece.
  EXPECT_EQ(inverse_cdf(u, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(inverse_cdf(u, 0.75), 0.5);
  EXPECT_THROW(inverse_cdf(u, 1.5), ValidationError);
  EXPECT_THROW(inverse_cdf(u, -0.1), ValidationError);
}

TEST(InverseCdf, FlatSegmentsPickSmallestTime) {
  const auto d = normalize(tr({0, 2, 0, 2}));
  EXPECT_EQ(inverse_cdf(d, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(inverse_cdf(d, 0.75), 2.5);
  const auto z = normalize(tr({0, 0, 1}));
  EXPECT_EQ(inverse_cdf(z, 1e-9), 1.0 + 1e-9);
}

TEST(InverseCdf, MatchesOracleOnRandomDensities) {
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> v(37);
    for (auto& x : v) x = u(eng) < 0.2 ? 0.0 : u(eng);
    v[5] = 1.0;
    const auto d = normalize(tr(v, 0.5, 0.1));
    const std::vector<double> cdf(d.cdf().begin(), d.cdf().end());
    const auto t = d.grid().times();
    for (int k = 0; k <= 100; ++k) {
      const double p = k / 100.0;
      EXPECT_NEAR(inverse_cdf(d, p), oracle::interpolated_quantile(cdf, t, p), 1e-12);
    }
  }
}

TEST(W2, IdentityIsZero) {
  const auto f = tr({0.5, -0.2, 1.0, 3.0, 0.1});
  const std::vector<ScalingStrategy> all{LinearScaling{}, SquareScaling{}, ExponentialScaling{1.0},
                                         AbsoluteScaling{}, LinearExponentialScaling{1.0}};
  for (const auto& s : all) EXPECT_LE(w2_distance(f, f, s), 1e-10) << scaling_name(s);
}

TEST(W2, PointMasses) {
  const auto f = tr({0, 1, 0, 0});
  const auto g = tr({0, 0, 1, 0});
  EXPECT_DOUBLE_EQ(transport(normalize(f), normalize(g)).distance, 1.0);
  EXPECT_DOUBLE_EQ(transport(normalize(g), normalize(f)).distance, 1.0);
}

TEST(W2, NonnegativeAndMonotoneMap) {
  std::mt19937_64 eng(3);
  std::normal_distribution<double> n01;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> a(64), b(64);
    for (auto& x : a) x = n01(eng);
    for (auto& x : b) x = n01(eng);
    const auto f = tr(a);
    const auto g = tr(b);
    EXPECT_GE(w2_distance(f, g, LinearScaling{}), 0.0);
    const auto ev = transport(normalize(apply_scaling(f, SquareScaling{})), normalize(apply_scaling(g, ExponentialScaling{})));
    for (std::size_t i = 1; i < ev.map_values.size(); ++i) EXPECT_GE(ev.map_values[i], ev.map_values[i - 1]);
  }
}

TEST(W2, AgreesWithTabulatedQuantileOracle) {
  std::mt19937_64 eng(11);
  const auto grid = make_grid(0.0, 1.0, 101);
  const auto t = grid.times();
  for (int rep = 0; rep < 20; ++rep) {
    const auto a = oracle::smooth_positive(eng, t);
    const auto b = oracle::smooth_positive(eng, t);
    const double d = w2_distance(Trace(grid, a), Trace(grid, b), LinearScaling{});
    // Positive traces: the linear scaling adds only its margin, which the oracle mirrors.
    const double c = auto_shift_constant(Trace(grid, a), Trace(grid, b), 1e-2 * std::max({*std::max_element(a.begin(), a.end()), *std::max_element(b.begin(), b.end()), 1.0}));
    std::vector<double> as(a), bs(b);
    for (auto& x : as) x += c;
    for (auto& x : bs) x += c;
    const double o = oracle::w2_weighted_nodes(as, bs, t);
    EXPECT_NEAR(d, o, 1e-3 * o);
  }
}

// The discrete sum is a right-endpoint rule for int |F^-1 - G^-1|^2 dp: the
// gap to the continuum integral shrinks at first order in 1/n.
TEST(W2, ConvergesToQuantileIntegral) {
  auto mean_gap = [](std::size_t n) {
    std::mt19937_64 eng(5);
    const auto grid = make_grid(0.0, 1.0, n);
    const auto t = grid.times();
    double sum = 0.0;
    constexpr int reps = 12;
    for (int rep = 0; rep < reps; ++rep) {
      const auto a = oracle::smooth_positive(eng, t);
      const auto b = oracle::smooth_positive(eng, t);
      const double d = transport(normalize(Trace(grid, a)), normalize(Trace(grid, b))).distance;
      const double o = oracle::w2_integral(a, b, t, 100000);
      sum += std::abs(d - o) / o;
    }
    return sum / reps;
  };
  const double e101 = mean_gap(101);
  const double e401 = mean_gap(401);
  EXPECT_LT(e101, 0.03);
  EXPECT_GT(e101 / e401, 3.0);
  EXPECT_LT(e101 / e401, 5.5);
}

TEST(L2, Examples) {
  EXPECT_EQ(l2_distance(tr({1, 2}), tr({1, 2})), 0.0);
  EXPECT_EQ(l2_distance(tr({0, 0}), tr({3, 4})), 25.0);
  std::vector<double> a(101, 0.3), b(101, 1.3);
  EXPECT_NEAR(l2_distance(tr(a), tr(b)), 101.0, 1e-12);
  EXPECT_THROW(l2_distance(tr({1, 2}), tr({1, 2}, 0.0, 0.5)), ValidationError);
}

TEST(MultiTrace, AdditiveAndLabelPaired) {
  const auto a = tr({1, 2, 3, 1});
  const auto b = tr({3, 1, 1, 2});
  const auto c = tr({1, 1, 4, 0.5});
  const Gather f({a, b}, {{0, 0, 0}, {0, 1, 0}});
  const Gather g({c, a}, {{0, 0, 0}, {0, 1, 0}});
  const Gather g_perm({a, c}, {{0, 1, 0}, {0, 0, 0}});
  const ScalingStrategy s = LinearScaling{};
  const double expect = w2_distance(a, c, s) + w2_distance(b, a, s);
  EXPECT_DOUBLE_EQ(multi_trace_w2(f, g, s), expect);
  EXPECT_DOUBLE_EQ(multi_trace_w2(f, g_perm, s), expect);
  EXPECT_EQ(multi_trace_w2(f, f, s), 0.0);
  const Gather other({c, a}, {{0, 0, 0}, {0, 2, 0}});
  EXPECT_THROW(multi_trace_w2(f, other, s), ValidationError);
}
