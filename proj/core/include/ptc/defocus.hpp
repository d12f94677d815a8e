#pragma once

// Temperature protection by defocusing. The intercept factor (IF) is the
// fraction of the reflected irradiance that still reaches the receiver;
// 1 means fully focused.

#include <array>
#include <span>

#include "ptc/models.hpp"

namespace ptc::defocus {

inline constexpr double kLumpedMaxTemperature = 392.0;
// IF decrement of the lumped scheme.
inline constexpr double kIfGridStep = 0.01;
// Time constant of the IF low-pass used with the distributed model, s.
inline constexpr double kIfFilterTau = 600.0;

struct DefocusLimits {
  double lumped_max = kLumpedMaxTemperature;
  // Block-outlet limits along the loop, inlet first.
  std::array<double, 4> collector_max{323.0, 348.0, 373.0, 390.0};
  // IF change per degC of excess per 0.25 s step.
  double gain = 0.004;
  // No refocusing while the block is within this many degC under its limit.
  double deadband = 1.0;

  void validate() const;
};

struct DefocusResult {
  double t_out;
  double intercept_factor;
};

// Static outlet with the IF lowered on the 0.01 grid until the outlet is at
// or below the limit. Returns the largest qualifying IF; IF = 0 (no
// irradiance) when even that does not satisfy the limit.
DefocusResult lumped_defocus(const models::LoopParams& params, double t_in, double t_a,
                             double i_eff, double q, const models::StaticOptions& options = {},
                             double t_max = kLumpedMaxTemperature);

// Same limit with the IF continuous: the largest IF in [0, 1], to about
// 1e-9, whose static outlet is at or below t_max.
DefocusResult lumped_defocus_exact(const models::LoopParams& params, double t_in, double t_a,
                                   double i_eff, double q, const models::StaticOptions& options = {},
                                   double t_max = kLumpedMaxTemperature);

struct LumpedDefocusStep {
  models::LumpedState state;
  double intercept_factor;
};

// Dynamic counterpart: one Euler step, with the IF lowered on the same grid
// until the stepped outlet is at or below the limit.
LumpedDefocusStep lumped_defocus_step(const models::LoopParams& params,
                                      const models::LumpedState& state, double t_a,
                                      double i_eff, double dt,
                                      double t_max = kLumpedMaxTemperature);

// Per-collector proportional rule for the distributed model. Above its limit
// a collector loses gain*excess of IF per 0.25 s; more than deadband below it
// recovers at the same gain; results clamped to [0, 1].
std::array<double, 4> collector_defocus_step(const models::DistributedState& state,
                                             const models::SegmentLayout& layout,
                                             const DefocusLimits& limits,
                                             std::span<const double, 4> current_if, double dt);

// First-order low-pass: y += (dt/tau) * (raw - y), coefficient clamped to [0, 1].
double filter_if(double raw, double prev_filtered, double dt, double tau = kIfFilterTau);

}  // namespace ptc::defocus
