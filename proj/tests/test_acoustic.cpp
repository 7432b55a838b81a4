#include <cmath>
#include <algorithm>
#include <numbers>
#include <set>

#include <gtest/gtest.h>

#include "w2bayes/acoustic.hpp"
#include "manufactured.hpp"
#include "w2bayes/errors.hpp"

using namespace w2b;

namespace {

AcousticConfig small_config() {
  AcousticConfig c;
  c.dx = 0.04;
  c.grid = make_grid(0.0, 1.0, 51);
  c.substeps = 3;
  c.blocks = {1, 2};
  c.sources = {{-0.4, -0.2}, {0.4, -0.2}};
  c.receivers = surface_receivers(-0.8, 0.8, 0.08);
  return c;
}

}  // namespace

TEST(AcousticGrid, Geometry) {
  const AcousticGrid g(0.02);
  EXPECT_EQ(g.nx(), 101u);
  EXPECT_EQ(g.nz(), 101u);
  EXPECT_DOUBLE_EQ(g.node(0, 0).x1, -1.0);
  EXPECT_DOUBLE_EQ(g.node(0, 0).x2, 0.0);
  EXPECT_NEAR(g.node(100, 100).x2, -2.0, 1e-12);
  EXPECT_EQ(g.locate({0.0, -1.0}), (std::pair<std::size_t, std::size_t>{50, 50}));
  EXPECT_THROW(g.locate({0.01, 0.0}), ValidationError);
  EXPECT_THROW(g.locate({1.5, 0.0}), ValidationError);
  EXPECT_THROW(AcousticGrid(0.03), ValidationError);
}

TEST(BlockLayout, IndexIsRowMajorFromSurface) {
  const BlockLayout b{2, 5};
  EXPECT_EQ(b.count(), 10u);
  EXPECT_EQ(b.index_of({-0.99, -0.01}), 0u);
  EXPECT_EQ(b.index_of({0.99, -0.01}), 4u);
  EXPECT_EQ(b.index_of({-0.99, -1.99}), 5u);
  EXPECT_EQ(b.index_of({0.0, -1.5}), 7u);
  EXPECT_EQ(b.index_of({0.99, -1.99}), 9u);
}

TEST(Ricker, WaveletExamples) {
  const RickerWavelet w;
  EXPECT_DOUBLE_EQ(w(0.1), 1000.0);
  const double t = 0.1 + std::sqrt(0.05);
  EXPECT_NEAR(w(t), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(ricker_source(0.1, {0.03, -0.23}, {0.0, -0.2}), 1000.0);
  EXPECT_DOUBLE_EQ(ricker_source(0.1, {0.05, -0.2}, {0.0, -0.2}), 0.0);
}

TEST(ReceiverLayout, TwoHundredOneDistinctPoints) {
  const auto r = build_receiver_layout_53();
  ASSERT_EQ(r.size(), 201u);
  std::set<std::pair<long, long>> seen;
  std::size_t surface = 0, left = 0, right = 0;
  for (const auto& p : r) {
    seen.insert({std::lround(p.x1 * 1e6), std::lround(p.x2 * 1e6)});
    if (std::abs(p.x2) < 1e-12) ++surface;
    else if (p.x1 < 0) ++left;
    else ++right;
  }
  EXPECT_EQ(seen.size(), 201u);
  EXPECT_EQ(surface, 101u);
  EXPECT_EQ(left, 50u);
  EXPECT_EQ(right, 50u);
}

TEST(AcousticSolver, ManufacturedSolutionConvergesSecondOrder) {
  const double e1 = manufactured::max_error(0.1);
  const double e2 = manufactured::max_error(0.05);
  const double e3 = manufactured::max_error(0.025);
  EXPECT_LT(e3, 1e-3);
  EXPECT_GT(e2 / e3, 3.4);
  EXPECT_LT(e2 / e3, 4.6);
  EXPECT_GT(e1 / e2, 3.0);
}

TEST(AcousticSolver, DiscreteEnergyConserved) {
  const AcousticGrid g(0.04);
  std::vector<double> speed((g.nx() - 1) * (g.nz() - 1));
  for (std::size_t c = 0; c < speed.size(); ++c) speed[c] = c % 7 < 3 ? 1.0 : 2.5;
  const AcousticSolver solver(g, speed);
  std::vector<double> u0(g.nodes(), 0.0), v0(g.nodes(), 0.0);
  for (std::size_t j = 1; j + 1 < g.nz(); ++j) {
    for (std::size_t i = 1; i + 1 < g.nx(); ++i) {
      const Point2 p = g.node(i, j);
      u0[g.index(i, j)] = std::exp(-50.0 * (p.x1 * p.x1 + (p.x2 + 1.0) * (p.x2 + 1.0)));
    }
  }
  const double dt = 0.9 * g.dx() / (2.5 * std::numbers::sqrt2);
  std::vector<double> prev;
  std::vector<double> energies;
  solver.run(dt, 400, u0, v0, nullptr, [&](std::size_t, std::span<const double> u) {
    if (!prev.empty()) energies.push_back(solver.energy(prev, u, dt));
    prev.assign(u.begin(), u.end());
  });
  ASSERT_EQ(energies.size(), 400u);
  // The first level uses a Taylor start, so compare from the second step on.
  for (std::size_t k = 2; k < energies.size(); ++k) EXPECT_NEAR(energies[k], energies[1], 1e-10 * energies[1]);
}

TEST(AcousticSolver, RejectsCflViolation) {
  const AcousticGrid g(0.1);
  const std::vector<double> speed((g.nx() - 1) * (g.nz() - 1), 1.0);
  const AcousticSolver solver(g, speed);
  const std::vector<double> z(g.nodes(), 0.0);
  EXPECT_NEAR(solver.cfl_number(0.05), 0.05 * std::numbers::sqrt2 / 0.1, 1e-15);
  EXPECT_THROW(solver.run(0.08, 10, z, z, nullptr, nullptr), NumericalError);
  EXPECT_NO_THROW(solver.run(0.07, 10, z, z, nullptr, nullptr));
}

TEST(AcousticModel, BlocksMapToCells) {
  auto c = small_config();
  c.blocks = {2, 5};
  const AcousticModel m(c);
  std::vector<double> th(10);
  for (std::size_t i = 0; i < 10; ++i) th[i] = 1.0 + 0.1 * static_cast<double>(i);
  const auto sp = m.cell_speeds(th);
  const std::size_t nc = m.node_grid().nx() - 1;
  EXPECT_DOUBLE_EQ(sp[0], 1.0);
  EXPECT_DOUBLE_EQ(sp[nc - 1], 1.4);
  EXPECT_DOUBLE_EQ(sp[sp.size() - 1], 1.9);
  EXPECT_DOUBLE_EQ(sp[(m.node_grid().nz() - 2) * nc], 1.5);
}

TEST(AcousticModel, BoundaryReceiversRecordedInside) {
  auto c = small_config();
  c.receivers = {{-1.0, 0.0}, {0.0, 0.0}, {1.0, -1.0}};
  const AcousticModel m(c);
  const auto& g = m.node_grid();
  EXPECT_EQ(m.receiver_nodes()[0], g.index(1, 1));
  EXPECT_EQ(m.receiver_nodes()[1], g.index(25, 1));
  EXPECT_EQ(m.receiver_nodes()[2], g.index(g.nx() - 2, 25));
}

TEST(AcousticModel, MirrorSymmetricSourcesAndThreadInvariance) {
  auto c = small_config();
  const AcousticModel serial(c);
  c.threads = 2;
  const AcousticModel threaded(c);
  const std::vector<double> th{3.0, 3.0};
  const auto a = serial.simulate(th);
  const auto b = threaded.simulate(th);
  ASSERT_EQ(a.size(), 2 * c.receivers.size());
  const std::size_t nr = c.receivers.size();
  double peak = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r) {
    EXPECT_TRUE(std::ranges::equal(a.trace(r).values(), b.trace(r).values()));
    for (double v : a.trace(r).values()) peak = std::max(peak, std::abs(v));
  }
  EXPECT_GT(peak, 0.0);
  // Source 1 mirrors source 0 about x1 = 0.
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t k = 0; k < c.grid.size(); ++k) {
      EXPECT_NEAR(a.trace(nr + r)[k], a.trace(nr - 1 - r)[k], 1e-9 * peak);
    }
  }
  EXPECT_EQ(a.label(nr).source, 1);
  EXPECT_EQ(a.label(nr).receiver, 0);
}

TEST(AcousticModel, CflAndSpeedErrors) {
  const AcousticModel m(small_config());
  const std::vector<double> fast{3.0, 30.0}, negative{3.0, -1.0};
  EXPECT_THROW(m.simulate(fast), NumericalError);
  EXPECT_THROW(m.simulate(negative), NumericalError);
  auto c = small_config();
  c.blocks = {3, 2};
  EXPECT_THROW(AcousticModel{c}, ValidationError);
}

TEST(AcousticSourceModel, DepthChangesArrivalAndAmplitudeScales) {
  SourceModelConfig c;
  c.receivers = surface_receivers(-0.8, 0.8, 0.4);
  const AcousticSourceModel m(c);
  const std::vector<double> shallow{-0.4, 0.3, 10.0, 1000.0}, loud{-0.4, 0.3, 10.0, 2000.0};
  const auto g1 = m.simulate(shallow), g2 = m.simulate(loud);
  for (std::size_t k = 0; k < c.grid.size(); ++k) EXPECT_NEAR(g2.trace(2)[k], 2.0 * g1.trace(2)[k], 1e-9);
  const std::vector<double> edge{-1.99, 0.3, 10.0, 1000.0}, flat{-0.4, 0.3, 0.0, 1000.0};
  EXPECT_THROW(m.simulate(edge), NumericalError);
  EXPECT_THROW(m.simulate(flat), NumericalError);
}
