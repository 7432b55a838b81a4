#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "w2bayes/errors.hpp"
#include "w2bayes/signal.hpp"
#include "w2bayes/signal_io.hpp"

using namespace w2b;

TEST(TimeGrid, ScenarioGrids) {
  const auto g1 = make_grid(0.0, 5.0, 101);
  EXPECT_DOUBLE_EQ(g1.dt(), 0.05);
  EXPECT_DOUBLE_EQ(g1.final_time(), 5.0);
  const auto g3 = make_grid(0.0, 4.0, 801);
  EXPECT_DOUBLE_EQ(g3.dt(), 0.005);
  EXPECT_DOUBLE_EQ(g3.final_time(), 4.0);
}

TEST(TimeGrid, TwoPoints) {
  const auto g = make_grid(0.0, 1.0, 2);
  EXPECT_EQ(g.dt(), 1.0);
  EXPECT_EQ(g.times(), (std::vector<double>{0.0, 1.0}));
}

TEST(TimeGrid, RejectsDegenerate) {
  EXPECT_THROW(make_grid(0.0, 1.0, 1), ValidationError);
  EXPECT_THROW(make_grid(1.0, 1.0, 10), ValidationError);
  EXPECT_THROW(make_grid(2.0, 1.0, 10), ValidationError);
  EXPECT_THROW(TimeGrid(0.0, -0.1, 10), ValidationError);
}

TEST(TimeGrid, ReconstructionRoundtrip) {
  for (auto [t0, T, n] : {std::tuple{0.0, 5.0, 101}, {0.3, 4.1, 777}, {-2.0, 8.0, 1001}}) {
    const auto g = make_grid(t0, T, static_cast<std::size_t>(n));
    const auto h = make_grid(t0, g.final_time(), g.size());
    EXPECT_NEAR(h.dt(), g.dt(), 4 * std::numeric_limits<double>::epsilon() * g.dt());
    EXPECT_TRUE(g.same_as(h));
  }
}

TEST(TraceStats, Examples) {
  const auto g4 = make_grid(0.0, 3.0, 4);
  auto s = trace_stats(Trace(g4, {1, 1, 1, 1}));
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.max, 1.0);
  EXPECT_EQ(s.total_mass, 4.0);
  s = trace_stats(Trace(make_grid(0, 2, 3), {-1, 0, 3}));
  EXPECT_EQ(s.min, -1.0);
  EXPECT_EQ(s.max, 3.0);
  EXPECT_EQ(s.total_mass, 2.0);
  s = trace_stats(Trace(make_grid(0, 1, 2), {0.5, 0.5}));
  EXPECT_EQ(s.total_mass, 1.0);
}

TEST(Trace, RejectsNonFiniteAndLengthMismatch) {
  const auto g = make_grid(0, 1, 3);
  EXPECT_THROW(Trace(g, {0.0, std::nan(""), 1.0}), NumericalError);
  EXPECT_THROW(Trace(g, {0.0, std::numeric_limits<double>::infinity(), 1.0}), NumericalError);
  EXPECT_THROW(Trace(g, {0.0, 1.0}), ValidationError);
}

TEST(Gather, Invariants) {
  const auto g = make_grid(0, 1, 3);
  const Trace a(g, {1, 2, 3});
  EXPECT_THROW(Gather({}, {}), ValidationError);
  EXPECT_THROW(Gather({a, a}, {{0, 0, 0}, {0, 0, 0}}), ValidationError);
  EXPECT_THROW(Gather({a, Trace(make_grid(0, 2, 3), {1, 2, 3})}, {{0, 0, 0}, {0, 1, 0}}), ValidationError);
  const Gather ok({a, a}, {{0, 1, 0}, {0, 0, 0}});
  EXPECT_EQ(ok.find({0, 0, 0}), 1u);
  EXPECT_EQ(ok.find({1, 0, 0}), 2u);
  EXPECT_EQ(ok.label(0).receiver, 1);
}

TEST(Gather, ConcatKeepsOrderAndRejectsClashes) {
  const auto g = make_grid(0, 1, 3);
  const Trace a(g, {1, 2, 3});
  const std::vector<Gather> parts{Gather({a}, {{0, 0, 0}}), Gather({a}, {{1, 0, 0}})};
  const auto c = Gather::concat(parts);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.label(1).source, 1);
  const std::vector<Gather> clash{Gather({a}, {{0, 0, 0}}), Gather({a}, {{0, 0, 0}})};
  EXPECT_THROW(Gather::concat(clash), ValidationError);
}

namespace {

Gather sample_gather() {
  const auto g = make_grid(0.0, 1.0, 11);
  std::vector<double> v1, v2;
  for (std::size_t k = 0; k < 11; ++k) {
    v1.push_back(std::sin(0.3 * static_cast<double>(k)) / 3.0);
    v2.push_back(1e-7 * static_cast<double>(k * k) - 2.5);
  }
  return Gather({Trace(g, v1), Trace(g, v2)}, {{0, 3, 0}, {2, 1, 1}});
}

}  // namespace

TEST(SignalIo, CsvRoundtrip) {
  const auto g = sample_gather();
  std::stringstream ss;
  write_csv(ss, gather_to_csv(g));
  const auto text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "time,s0:r3:c0,s2:r1:c1");
  const auto back = gather_from_csv(read_csv(ss));
  ASSERT_EQ(back.size(), g.size());
  EXPECT_TRUE(back.grid().same_as(g.grid()));
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(back.label(i), g.label(i));
    for (std::size_t k = 0; k < g.grid().size(); ++k) {
      EXPECT_NEAR(back.trace(i)[k], g.trace(i)[k], 1e-12 * std::max(1.0, std::abs(g.trace(i)[k])));
    }
  }
}

TEST(SignalIo, JsonRoundtrip) {
  const auto g = sample_gather();
  const auto j = gather_to_json(g);
  EXPECT_EQ(j["grid"]["n"], 11);
  const auto back = gather_from_json(nlohmann::json::parse(j.dump()));
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(back.label(i), g.label(i));
    for (std::size_t k = 0; k < g.grid().size(); ++k) EXPECT_DOUBLE_EQ(back.trace(i)[k], g.trace(i)[k]);
  }
}

TEST(SignalIo, NanCellsAndBadNumbers) {
  std::stringstream ss("a,b\n1,\n2,3\n");
  const auto t = read_csv(ss);
  EXPECT_TRUE(std::isnan(t.rows[0][1]));
  EXPECT_EQ(t.rows[1][1], 3.0);
  std::stringstream bad("a\n1x\n");
  EXPECT_THROW(read_csv(bad), ValidationError);
  EXPECT_EQ(parse_label_token("s4:r12:c0"), (TraceLabel{4, 12, 0}));
  EXPECT_THROW(parse_label_token("r12"), ValidationError);
}

TEST(SignalIo, FormatIsLocaleFreeAndShortest) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-2.5e-300), "-2.5e-300");
  EXPECT_EQ(format_double(3.0), "3");
}
