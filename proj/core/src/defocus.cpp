#include "ptc/defocus.hpp"

#include <algorithm>
#include <cmath>

#include "ptc/errors.hpp"

namespace ptc::defocus {
namespace {

constexpr int kGridPoints = 100;  // IF = k / 100, k = 0..100
constexpr double kReferenceStep = 0.25;

double grid_if(int k) { return static_cast<double>(k) / kGridPoints; }

// Largest k in [0, 100] with pred(k) true, given pred is monotone
// (true on a prefix). Returns -1 when pred(0) is false.
template <class Pred>
int largest_satisfying(Pred pred) {
  if (pred(kGridPoints)) return kGridPoints;
  if (!pred(0)) return -1;
  int lo = 0;            // pred(lo) true
  int hi = kGridPoints;  // pred(hi) false
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (pred(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

void DefocusLimits::validate() const {
  for (std::size_t c = 1; c < collector_max.size(); ++c) {
    if (!(collector_max[c] > collector_max[c - 1])) {
      throw ConfigError("DefocusLimits: collector limits must increase along the loop");
    }
  }
  if (!(gain > 0.0)) throw ConfigError("DefocusLimits: gain must be positive");
  if (!(deadband >= 0.0)) throw ConfigError("DefocusLimits: deadband must be non-negative");
}

namespace {

// True when the static outlet at the given IF is within the limit. At very
// low flow the fixed point can fail far above any limit; such an IF simply
// does not qualify.
bool qualifies(const models::LoopParams& params, double t_in, double t_a, double i_eff, double q,
               const models::StaticOptions& options, double t_max, double factor, double* t_out) {
  try {
    const double t = models::static_outlet(params, t_in, t_a, i_eff * factor, q, options);
    if (t_out) *t_out = t;
    return t <= t_max;
  } catch (const NumericalError&) {
    return false;
  }
}

}  // namespace

DefocusResult lumped_defocus(const models::LoopParams& params, double t_in, double t_a,
                             double i_eff, double q, const models::StaticOptions& options,
                             double t_max) {
  const auto ok = [&](double factor, double* t_out) {
    return qualifies(params, t_in, t_a, i_eff, q, options, t_max, factor, t_out);
  };
  double focused = 0.0;
  if (ok(1.0, &focused)) return {focused, 1.0};

  // The outlet rises monotonically with the IF, so the first grid point met
  // while stepping down from 1 is found by bisection over the grid.
  const int k = largest_satisfying([&](int kk) { return ok(grid_if(kk), nullptr); });
  const int chosen = std::max(k, 0);
  const double t_out =
      models::static_outlet(params, t_in, t_a, i_eff * grid_if(chosen), q, options);
  return {t_out, grid_if(chosen)};
}

DefocusResult lumped_defocus_exact(const models::LoopParams& params, double t_in, double t_a,
                                   double i_eff, double q, const models::StaticOptions& options,
                                   double t_max) {
  const auto ok = [&](double factor, double* t_out) {
    return qualifies(params, t_in, t_a, i_eff, q, options, t_max, factor, t_out);
  };
  double t_out = 0.0;
  if (ok(1.0, &t_out)) return {t_out, 1.0};
  if (!ok(0.0, &t_out)) return {models::static_outlet(params, t_in, t_a, 0.0, q, options), 0.0};
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid, nullptr) ? lo : hi) = mid;
  }
  return {models::static_outlet(params, t_in, t_a, i_eff * lo, q, options), lo};
}

LumpedDefocusStep lumped_defocus_step(const models::LoopParams& params,
                                      const models::LumpedState& state, double t_a,
                                      double i_eff, double dt, double t_max) {
  if (!(dt > 0.0)) throw DomainError("lumped_defocus_step: dt must be positive");
  // Candidate outlets are screened unchecked; only the chosen one must stay
  // inside the sanity band.
  const auto stepped = [&](double factor) {
    return state.t_out + dt * models::lumped_derivative(params, state, t_a, i_eff * factor);
  };
  if (stepped(1.0) <= t_max) return {models::lumped_step(params, state, t_a, i_eff, dt), 1.0};
  const int k = largest_satisfying([&](int kk) { return stepped(grid_if(kk)) <= t_max; });
  const int chosen = std::max(k, 0);
  return {models::lumped_step(params, state, t_a, i_eff * grid_if(chosen), dt), grid_if(chosen)};
}

std::array<double, 4> collector_defocus_step(const models::DistributedState& state,
                                             const models::SegmentLayout& layout,
                                             const DefocusLimits& limits,
                                             std::span<const double, 4> current_if, double dt) {
  if (layout.block_outlet.size() != 4) {
    throw DomainError("collector_defocus_step: layout must have four collector blocks");
  }
  const double gain = limits.gain * dt / kReferenceStep;
  std::array<double, 4> out{};
  for (std::size_t c = 0; c < 4; ++c) {
    const double t_block = state.t_fluid.at(layout.block_outlet[c]);
    const double limit = limits.collector_max[c];
    double value = current_if[c];
    if (t_block > limit) {
      value -= gain * (t_block - limit);
    } else if (t_block < limit - limits.deadband) {
      value += gain * (limit - limits.deadband - t_block);
    }
    out[c] = std::clamp(value, 0.0, 1.0);
  }
  return out;
}

double filter_if(double raw, double prev_filtered, double dt, double tau) {
  if (!(dt > 0.0)) throw DomainError("filter_if: dt must be positive");
  const double alpha = std::clamp(dt / tau, 0.0, 1.0);
  return prev_filtered + alpha * (raw - prev_filtered);
}

}  // namespace ptc::defocus
