#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "ptc/defocus.hpp"
#include "ptc/errors.hpp"

using namespace ptc;
using namespace ptc::defocus;

namespace {

models::StaticOptions tight() {
  models::StaticOptions o;
  o.tolerance = 1e-10;
  o.max_iterations = 200;
  return o;
}

// Largest IF on the 0.01 grid whose static outlet respects the limit, by
// trying every grid point from the top.
double scanned_if(const models::LoopParams& p, double t_in, double t_a, double i_eff, double q) {
  for (int k = 100; k >= 0; --k) {
    if (models::static_outlet(p, t_in, t_a, i_eff * k / 100.0, q, tight()) <= kLumpedMaxTemperature) {
      return k / 100.0;
    }
  }
  return 0.0;
}

models::DistributedState with_block_outlets(const models::SegmentLayout& l, std::array<double, 4> t) {
  auto s = models::DistributedState::uniform(l.n_segments, 300.0, 0.008);
  for (int c = 0; c < 4; ++c) s.t_fluid[l.block_outlet[c]] = t[c];
  return s;
}

}  // namespace

TEST(LumpedDefocus, NightIsFullyFocused) {
  const auto r = lumped_defocus(models::LoopParams{}, 293.0, 25.0, 0.0, 0.008);
  EXPECT_EQ(r.intercept_factor, 1.0);
  EXPECT_LT(r.t_out, 293.0);
}

TEST(LumpedDefocus, BelowLimitIsUntouched) {
  const models::LoopParams p;
  const auto r = lumped_defocus(p, 293.0, 25.0, 850.0, 0.012);
  EXPECT_EQ(r.intercept_factor, 1.0);
  EXPECT_DOUBLE_EQ(r.t_out, models::static_outlet(p, 293.0, 25.0, 850.0, 0.012));
}

TEST(LumpedDefocus, ExhaustiveScanAgrees) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ii(500.0, 1000.0), qq(0.002, 0.009), u(0.0, 1.0);
  int saturated = 0;
  for (int k = 0; k < 60; ++k) {
    models::LoopParams p;
    p.alpha_kopt = 0.85 + 0.15 * u(rng);
    p.alpha_hl = u(rng);
    const double i = ii(rng), q = qq(rng), t_in = 280.0 + 20.0 * u(rng);
    const auto r = lumped_defocus(p, t_in, 25.0, i, q, tight());
    EXPECT_DOUBLE_EQ(r.intercept_factor, scanned_if(p, t_in, 25.0, i, q)) << "case " << k;
    EXPECT_LE(r.t_out, kLumpedMaxTemperature + 1e-8);
    if (r.intercept_factor < 1.0) ++saturated;
  }
  EXPECT_GT(saturated, 10);
}

TEST(LumpedDefocus, ImpossibleLimitGivesZero) {
  // Inlet already above the limit: no IF helps.
  const auto r = lumped_defocus(models::LoopParams{}, 395.0, 25.0, 900.0, 0.008);
  EXPECT_EQ(r.intercept_factor, 0.0);
  EXPECT_DOUBLE_EQ(r.t_out, models::static_outlet(models::LoopParams{}, 395.0, 25.0, 0.0, 0.008));
}

TEST(LumpedDefocusStep, StepStaysUnderLimit) {
  models::LumpedState s{293.0, 293.0, 0.003};
  double prev_if = 1.0;
  for (int k = 0; k < 300; ++k) {
    const auto r = lumped_defocus_step(models::LoopParams{}, s, 25.0, 950.0, 10.0);
    EXPECT_LE(r.state.t_out, kLumpedMaxTemperature + 1e-9);
    EXPECT_GE(r.intercept_factor, 0.0);
    EXPECT_LE(r.intercept_factor, 1.0);
    s = r.state;
    prev_if = r.intercept_factor;
  }
  EXPECT_LT(prev_if, 1.0);
}

TEST(CollectorDefocus, ColdBlocksStayFocused) {
  const auto l = models::SegmentLayout::proportional(models::LoopParams{});
  const DefocusLimits lim;
  const auto s = with_block_outlets(l, {313.0, 338.0, 363.0, 380.0});
  const std::array<double, 4> f{1, 1, 1, 1};
  EXPECT_EQ(collector_defocus_step(s, l, lim, f, 0.25), f);
}

TEST(CollectorDefocus, LimitIsInsideDeadband) {
  const auto l = models::SegmentLayout::proportional(models::LoopParams{});
  const auto s = with_block_outlets(l, {313.0, 338.0, 363.0, 390.0});
  const std::array<double, 4> f{1, 1, 1, 0.7};
  EXPECT_EQ(collector_defocus_step(s, l, DefocusLimits{}, f, 0.25)[3], 0.7);
}

TEST(CollectorDefocus, ProportionalDecrease) {
  const auto l = models::SegmentLayout::proportional(models::LoopParams{});
  const auto s = with_block_outlets(l, {313.0, 338.0, 363.0, 395.0});
  const std::array<double, 4> f{1, 1, 1, 1};
  const auto r = collector_defocus_step(s, l, DefocusLimits{}, f, 0.25);
  EXPECT_NEAR(r[3], 1.0 - 0.004 * 5.0, 1e-15);
  EXPECT_EQ(r[0], 1.0);
  // Gain is per 0.25 s, so a full second applies four times as much.
  EXPECT_NEAR(collector_defocus_step(s, l, DefocusLimits{}, f, 1.0)[3], 1.0 - 0.08, 1e-15);
}

TEST(CollectorDefocus, RecoversBelowDeadband) {
  const auto l = models::SegmentLayout::proportional(models::LoopParams{});
  const auto s = with_block_outlets(l, {313.0, 338.0, 363.0, 380.0});
  const std::array<double, 4> f{0.5, 0.5, 0.5, 0.5};
  const auto r = collector_defocus_step(s, l, DefocusLimits{}, f, 0.25);
  for (double x : r) EXPECT_GT(x, 0.5);
}

TEST(CollectorDefocus, MonotoneInBlockTemperature) {
  const auto l = models::SegmentLayout::proportional(models::LoopParams{});
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> t(300.0, 420.0), u(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    std::array<double, 4> temps{t(rng), t(rng), t(rng), t(rng)};
    const std::array<double, 4> f{u(rng), u(rng), u(rng), u(rng)};
    const auto a = collector_defocus_step(with_block_outlets(l, temps), l, DefocusLimits{}, f, 0.25);
    const int c = k % 4;
    temps[c] += 3.0 * u(rng);
    const auto b = collector_defocus_step(with_block_outlets(l, temps), l, DefocusLimits{}, f, 0.25);
    EXPECT_LE(b[c], a[c]);
    for (double x : b) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
  }
}

TEST(FilterIf, Examples) {
  EXPECT_EQ(filter_if(0.4, 0.4, 30.0), 0.4);
  EXPECT_EQ(filter_if(1.0, 0.0, 600.0), 1.0);
  EXPECT_EQ(filter_if(1.0, 0.0, 6000.0), 1.0);
  EXPECT_NEAR(filter_if(1.0, 0.0, 60.0), 0.1, 1e-15);
}

TEST(FilterIf, ConvexCombination) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0), dt(0.0, 900.0);
  for (int k = 0; k < 1000; ++k) {
    const double raw = u(rng), prev = u(rng);
    const double y = filter_if(raw, prev, dt(rng));
    EXPECT_GE(y, std::min(raw, prev) - 1e-15);
    EXPECT_LE(y, std::max(raw, prev) + 1e-15);
  }
}

TEST(DefocusLimits, Validation) {
  DefocusLimits l;
  EXPECT_NO_THROW(l.validate());
  l.gain = -1.0;
  EXPECT_ANY_THROW(l.validate());
}
