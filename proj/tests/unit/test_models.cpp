#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include "ptc/errors.hpp"
#include "ptc/models.hpp"
#include "support/oracles.hpp"

using namespace ptc::models;

namespace {

using ptc::oracle::cp;
using ptc::oracle::hl;
using ptc::oracle::rho;

// Right-hand side of the lumped balance times C_loop.
double eq4_rhs(const LoopParams& p, double t_out, double t_in, double t_a, double i_eff, double q) {
  const double tm = 0.5 * (t_in + t_out);
  const double h = p.loss_coeff_override ? *p.loss_coeff_override : hl(tm, t_a);
  return (2.0 - p.alpha_hl) * h * p.lumped_loss_area * (t_a - tm) +
         p.alpha_kopt * p.optical_efficiency * i_eff * p.aperture_area + q * rho(tm) * cp(tm) * (t_in - t_out);
}

double eq4_steady_state(const LoopParams& p, double t_in, double t_a, double i_eff, double q) {
  double lo = t_a - 50.0, hi = 500.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (eq4_rhs(p, mid, t_in, t_a, i_eff, q) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

LoopParams consistent_params() {
  LoopParams p;
  p.loss_coeff_override = 1.0;
  p.alpha_hl = 1.0;
  return p;
}

}  // namespace

TEST(LoopParams, Validation) {
  LoopParams p;
  EXPECT_NO_THROW(p.validate());
  p.alpha_kopt = 0.0;
  EXPECT_THROW(p.validate(), ptc::DomainError);
  p = LoopParams{};
  p.alpha_hl = 1.5;
  EXPECT_THROW(p.validate(), ptc::DomainError);
  p = LoopParams{};
  p.tube_perimeter = 0.0;
  EXPECT_THROW(p.validate(), ptc::DomainError);
  EXPECT_DOUBLE_EQ(LoopParams{}.loss_multiplier(), 1.0);
}

TEST(StaticOutlet, NoGainNoGradient) {
  // With T_a = T_in / 2 the ambient term of the closed form vanishes.
  EXPECT_DOUBLE_EQ(static_outlet(LoopParams{}, 50.0, 25.0, 0.0, 0.01), 50.0);
}

TEST(StaticOutlet, LargeFlowApproachesInlet) {
  double prev = INFINITY;
  for (double q : {0.005, 0.05, 0.5, 5.0, 50.0}) {
    const double rise = static_outlet(LoopParams{}, 293.0, 25.0, 850.0, q) - 293.0;
    EXPECT_LT(rise, prev);
    prev = rise;
  }
  EXPECT_LT(prev, 0.05);
}

TEST(StaticOutlet, MatchesSteadyStateOfLumpedBalance) {
  // Under unit loss coefficient and no loss fault the closed form is exactly
  // the steady state of the ODE.
  LoopParams p = consistent_params();
  StaticOptions tight;
  tight.tolerance = 1e-12;
  tight.max_iterations = 200;
  const double q = 0.0085;
  const double oracle = eq4_steady_state(p, 293.0, 25.0, 900.0 * 0.95, q);
  EXPECT_NEAR(static_outlet(p, 293.0, 25.0, 900.0 * 0.95, q, tight), oracle, 1e-8);

  // With the fitted H_l the two differ only through the small loss terms.
  LoopParams d;
  EXPECT_NEAR(static_outlet(d, 293.0, 25.0, 900.0 * 0.95, q), eq4_steady_state(d, 293.0, 25.0, 900.0 * 0.95, q),
              0.5);
}

TEST(StaticOutlet, Errors) {
  EXPECT_THROW(static_outlet(LoopParams{}, 293.0, 25.0, 800.0, 1e-7), ptc::DomainError);
  EXPECT_THROW(static_outlet(LoopParams{}, 293.0, 25.0, -1.0, 0.01), ptc::DomainError);
  StaticOptions one;
  one.max_iterations = 1;
  one.tolerance = 1e-12;
  try {
    static_outlet(LoopParams{}, 293.0, 25.0, 900.0, 0.008, one);
    FAIL() << "expected NumericalError";
  } catch (const ptc::NumericalError& e) {
    EXPECT_TRUE(std::isfinite(e.last_iterate()));
  }
}

TEST(StaticOutlet, DoublingIrradianceDoublesAbsorbedEnergy) {
  // H_l = 0 and T_a = T_in / 2 remove every loss term; what remains is
  // q*rho*C(T_mean)*(T_out - T_in) = solar, so the rise times rho*C doubles.
  LoopParams p;
  p.loss_coeff_override = 0.0;
  StaticOptions tight;
  tight.tolerance = 1e-12;
  tight.max_iterations = 200;
  const double t_in = 200.0, t_a = 100.0, q = 0.01;
  const auto absorbed = [&](double i_eff) {
    const double t = static_outlet(p, t_in, t_a, i_eff, q, tight);
    const double tm = 0.5 * (t_in + t);
    return q * rho(tm) * cp(tm) * (t - t_in);
  };
  EXPECT_NEAR(absorbed(800.0) / absorbed(400.0), 2.0, 1e-6 * 2.0);
}

TEST(StaticOutlet, MonotoneInIrradianceAndFlow) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ii(0.0, 1000.0), qq(0.003, 0.03);
  for (int k = 0; k < 200; ++k) {
    const double i = ii(rng), q = qq(rng);
    const double t = static_outlet(LoopParams{}, 293.0, 25.0, i, q);
    EXPECT_LE(t, static_outlet(LoopParams{}, 293.0, 25.0, i + 10.0, q) + 2e-3);
    EXPECT_GE(t, static_outlet(LoopParams{}, 293.0, 25.0, i, q * 1.1) - 2e-3);
  }
}

TEST(LumpedStep, ZeroRightHandSideLeavesStateUnchanged) {
  const LumpedState s{100.0, 100.0, 0.01};
  const LumpedState n = lumped_step(LoopParams{}, s, 100.0, 0.0, 30.0);
  EXPECT_EQ(n.t_out, 100.0);
}

TEST(LumpedStep, StaticSolutionIsAFixedPoint) {
  const LoopParams p = consistent_params();
  StaticOptions tight;
  tight.tolerance = 1e-12;
  tight.max_iterations = 200;
  const double t = static_outlet(p, 293.0, 25.0, 800.0, 0.009, tight);
  const LumpedState n = lumped_step(p, {t, 293.0, 0.009}, 25.0, 800.0, 30.0);
  EXPECT_LT(std::abs(n.t_out - t), 1e-6);
}

TEST(LumpedStep, StepResponseIsMonotone) {
  LumpedState s{293.0, 293.0, 0.009};
  double prev = s.t_out;
  for (int k = 0; k < 400; ++k) {
    s = lumped_step(LoopParams{}, s, 25.0, 850.0, 5.0);
    EXPECT_GE(s.t_out, prev);
    prev = s.t_out;
  }
}

TEST(LumpedStep, LeavingSanityBandThrows) {
  EXPECT_THROW(lumped_step(LoopParams{}, {499.0, 293.0, 1e-6}, 25.0, 1000.0, 3000.0), ptc::DivergenceError);
  EXPECT_THROW(lumped_step(LoopParams{}, {300.0, 293.0, 0.01}, 25.0, 0.0, 0.0), ptc::DomainError);
}

TEST(LumpedStep, ConvergesToStaticOutlet) {
  // Fitted H_l and the loss fault break the exact equivalence only slightly.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ii(100.0, 950.0), qq(0.004, 0.02), ah(0.0, 1.0), ak(0.85, 1.0);
  for (int k = 0; k < 20; ++k) {
    LoopParams p;
    p.alpha_hl = ah(rng);
    p.alpha_kopt = ak(rng);
    const double i = ii(rng), q = qq(rng);
    LumpedState s{293.0, 293.0, q};
    for (int n = 0; n < 200000; ++n) {
      const LumpedState next = lumped_step(p, s, 25.0, i, 5.0);
      const double d = std::abs(next.t_out - s.t_out);
      s = next;
      if (d < 1e-8) break;
    }
    EXPECT_NEAR(s.t_out, static_outlet(p, 293.0, 25.0, i, q), 0.5);
  }
}

TEST(SegmentLayout, ProportionalGrid) {
  const SegmentLayout l = SegmentLayout::proportional(LoopParams{});
  ASSERT_EQ(l.n_segments, 151u);
  ASSERT_EQ(l.collector.size(), 151u);
  EXPECT_DOUBLE_EQ(l.segment_length, 3.213);
  const auto active = std::count_if(l.collector.begin(), l.collector.end(), [](int c) { return c >= 0; });
  EXPECT_EQ(active, 144);
  ASSERT_EQ(l.block_outlet.size(), 4u);
  for (int c = 0; c < 4; ++c) {
    EXPECT_EQ(std::count(l.collector.begin(), l.collector.end(), c), 36);
    EXPECT_EQ(l.collector[l.block_outlet[c]], c);
    EXPECT_NE(l.collector[l.block_outlet[c] + 1], c);
  }
  // Blocks are contiguous and in order.
  int last = -1;
  for (int c : l.collector) {
    if (c >= 0) {
      EXPECT_GE(c, last);
      last = c;
    }
  }
  EXPECT_EQ(l.collector.front(), -1);
  EXPECT_EQ(l.collector.back(), -1);
}

TEST(DistributedStep, UniformAmbientStateIsStationary) {
  const LoopParams p;
  const SegmentLayout l = SegmentLayout::proportional(p);
  const DistributedState s = DistributedState::uniform(151, 25.0, 0.01);
  const std::array<double, 4> f{1, 1, 1, 1};
  const DistributedState n = distributed_step(p, l, s, 25.0, 0.0, 1.0, f, 25.0);
  for (std::size_t i = 0; i < 151; ++i) {
    EXPECT_EQ(n.t_fluid[i], 25.0);
    EXPECT_EQ(n.t_metal[i], 25.0);
  }
}

TEST(DistributedStep, EnergyBudgetCloses) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> temp(150.0, 400.0), q(0.002, 0.025), dni(0.0, 1000.0), u(0.0, 1.0);
  LoopParams p;
  const SegmentLayout l = SegmentLayout::proportional(p);
  for (int k = 0; k < 50; ++k) {
    p.alpha_hl = u(rng);
    p.alpha_kopt = 0.85 + 0.15 * u(rng);
    DistributedState s = DistributedState::uniform(151, 0.0, q(rng));
    for (std::size_t i = 0; i < 151; ++i) {
      s.t_fluid[i] = temp(rng);
      s.t_metal[i] = s.t_fluid[i] + 10.0 * (u(rng) - 0.5);
    }
    const std::array<double, 4> f{u(rng), u(rng), u(rng), u(rng)};
    const double i = dni(rng), n_o = 0.7 + 0.3 * u(rng), t_in = 280.0 + 20.0 * u(rng);
    const double dt = 0.25 / std::max(1.0, std::ceil(exchange_number(p, s.q, 400.0, 0.25) / 0.5));
    const DistributedState n = distributed_step(p, l, s, 30.0, i, n_o, f, t_in, dt);
    const auto b = ptc::oracle::energy_budget(p, l, s, n, 30.0, i, n_o, f, t_in, dt);
    EXPECT_LE(std::abs(b.stored - b.inputs), 1e-6 * b.scale) << "case " << k;
  }
}

TEST(DistributedStep, FluidAndMetalRelaxTowardEachOther) {
  LoopParams p;
  p.loss_coeff_override = 0.0;
  const SegmentLayout l = SegmentLayout::proportional(p);
  const std::array<double, 4> f{1, 1, 1, 1};
  DistributedState s = DistributedState::uniform(151, 300.0, 0.002);
  for (std::size_t i = 0; i < 151; ++i) s.t_metal[i] = 300.0 + (i % 2 ? 5.0 : -5.0);
  const DistributedState n = distributed_step(p, l, s, 25.0, 0.0, 1.0, f, 300.0);
  for (std::size_t i = 0; i < 151; ++i) {
    EXPECT_LT(std::abs(n.t_fluid[i] - n.t_metal[i]), std::abs(s.t_fluid[i] - s.t_metal[i]));
  }
  // The film coefficient vanishes with the flow, so a stagnant loop without
  // sources keeps its state.
  s.q = 0.0;
  const DistributedState z = distributed_step(p, l, s, 25.0, 0.0, 1.0, f, 300.0);
  EXPECT_EQ(z.t_fluid, s.t_fluid);
  EXPECT_EQ(z.t_metal, s.t_metal);
}

TEST(DistributedStep, CourantViolationThrows) {
  const LoopParams p;
  const SegmentLayout l = SegmentLayout::proportional(p);
  const DistributedState s = DistributedState::uniform(151, 293.0, 0.05);
  const std::array<double, 4> f{1, 1, 1, 1};
  EXPECT_GT(courant_number(p, l, 0.05, 0.25), 1.0);
  EXPECT_THROW(distributed_step(p, l, s, 25.0, 800.0, 1.0, f, 293.0), ptc::StabilityError);
  EXPECT_THROW(distributed_step(p, l, DistributedState::uniform(150, 293.0, 0.01), 25.0, 800.0, 1.0, f, 293.0),
               ptc::DomainError);
}

TEST(DistributedStep, SteadyOutletFallsWithFlow) {
  const LoopParams p;
  const SegmentLayout l = SegmentLayout::proportional(p);
  const std::array<double, 4> f{1, 1, 1, 1};
  double prev = INFINITY;
  for (double q : {0.006, 0.008, 0.010, 0.012}) {
    DistributedState s = DistributedState::uniform(151, 293.0, q);
    const int sub = static_cast<int>(std::ceil(exchange_number(p, q, 450.0, 0.25) / 0.5));
    const double dt = 0.25 / std::max(1, sub);
    for (double t = 0.0; t < 2400.0; t += dt) s = distributed_step(p, l, s, 25.0, 750.0, 0.95, f, 293.0, dt);
    EXPECT_LT(s.t_fluid.back(), prev);
    prev = s.t_fluid.back();
  }
}

TEST(ThermalPower, HandEvaluation) {
  EXPECT_NEAR(thermal_power(0.005, 293.0, 393.0), 943882.4152694005, 1e-6);
  EXPECT_EQ(thermal_power(0.0, 293.0, 393.0), 0.0);
  EXPECT_DOUBLE_EQ(thermal_power(0.01, 300.0, 300.0), -30.0);
  EXPECT_THROW(thermal_power(-0.01, 300.0, 300.0), ptc::DomainError);
}

TEST(ThermalPower, LinearInFlowAtFixedTemperatures) {
  const double a = thermal_power(0.004, 293.0, 380.0);
  EXPECT_NEAR(thermal_power(0.012, 293.0, 380.0), 3.0 * a, 1e-9 * std::abs(a));
}

TEST(FieldPower, Sums) {
  const std::vector<double> one{5.0};
  EXPECT_EQ(field_power(one).total, 5.0);
  const std::vector<double> zeros(4, 0.0);
  EXPECT_EQ(field_power(zeros).total, 0.0);
  const std::vector<double> ten(10, 1.25e6);
  EXPECT_NEAR(field_power(ten).total, 1.25e7, 1e-9 * 1.25e7);
  EXPECT_EQ(field_power(ten).penalty_factor, 3000.0);
  EXPECT_THROW(field_power(std::vector<double>{}), ptc::DegenerateInputError);
}
