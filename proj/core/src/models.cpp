#include "ptc/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ptc/errors.hpp"
#include "ptc/physics.hpp"

namespace ptc::models {
namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw DomainError(std::string("LoopParams: ") + name + " must be positive");
}

void check_sanity(double t, const char* where) {
  if (!std::isfinite(t) || t < kSanityMin || t > kSanityMax) {
    throw DivergenceError(std::string(where) + ": temperature " + std::to_string(t) +
                          " degC left the sanity band [-20, 500]");
  }
}

double rho_c(double t) {
  return physics::volumetric_heat_capacity(property_temperature(t));
}

}  // namespace

void LoopParams::validate() const {
  require_positive(loop_length, "loop_length");
  require_positive(active_length, "active_length");
  require_positive(aperture_area, "aperture_area");
  require_positive(optical_efficiency, "optical_efficiency");
  require_positive(metal.density, "metal.density");
  require_positive(metal.heat_capacity, "metal.heat_capacity");
  require_positive(metal.cross_section, "metal.cross_section");
  require_positive(fluid_cross_section, "fluid_cross_section");
  require_positive(collector_aperture, "collector_aperture");
  require_positive(tube_perimeter, "tube_perimeter");
  require_positive(lumped_loss_area, "lumped_loss_area");
  if (n_collectors < 1) throw DomainError("LoopParams: n_collectors must be >= 1");
  if (active_length > loop_length) {
    throw DomainError("LoopParams: active_length exceeds loop_length");
  }
  if (!(alpha_kopt > 0.0 && alpha_kopt <= 1.0)) {
    throw DomainError("LoopParams: alpha_kopt must lie in (0, 1]");
  }
  if (!(alpha_hl >= 0.0 && alpha_hl <= 1.0)) {
    throw DomainError("LoopParams: alpha_hl must lie in [0, 1]");
  }
}

double property_temperature(double t) {
  if (std::isnan(t)) return t;
  return std::clamp(t, physics::kMinFluidTemperature, physics::kMaxFluidTemperature);
}

double loss_coeff(const LoopParams& params, double t_f, double t_a) {
  if (params.loss_coeff_override) return *params.loss_coeff_override;
  return physics::bounded_loss_coeff(t_f, t_a);
}

double static_outlet(const LoopParams& params, double t_in, double t_a, double i_eff, double q,
                     const StaticOptions& options) {
  if (!(q >= kFlowFloor)) {
    throw DomainError("static_outlet: flow " + std::to_string(q) + " below floor 1e-6 m^3/s");
  }
  if (!(i_eff >= 0.0)) throw DomainError("static_outlet: negative effective irradiance");

  const double solar =
      params.alpha_kopt * params.optical_efficiency * i_eff * params.aperture_area;
  const double ambient_term = 0.8 * (0.5 * t_in - t_a) * params.loss_multiplier();

  double t_out = t_in;
  double damping = 1.0;
  int sign_flips = 0;
  double prev_residual = 0.0;
  for (int it = 0; it < options.max_iterations; ++it) {
    const double t_mean = 0.5 * (t_in + t_out);
    const double p_cp = rho_c(t_mean);
    const double h_l = loss_coeff(params, t_mean, t_a);
    const double candidate =
        (solar - ambient_term + q * t_in * p_cp) / (q * p_cp + 0.4 * h_l);
    const double residual = candidate - t_out;
    if (std::abs(residual) < options.tolerance) return candidate;

    if (it > 0 && (residual > 0.0) != (prev_residual > 0.0)) {
      if (++sign_flips >= 2) {
        damping = 0.5;
      }
    } else {
      sign_flips = 0;
    }
    prev_residual = residual;
    t_out += damping * residual;
  }
  throw NumericalError("static_outlet: fixed point did not converge in " +
                           std::to_string(options.max_iterations) + " iterations",
                       t_out);
}

double lumped_derivative(const LoopParams& params, const LumpedState& state, double t_a,
                         double i_eff) {
  const double t_mean = 0.5 * (state.t_in + state.t_out);
  const double p_cp = rho_c(t_mean);
  const double c_loop = params.loop_length * p_cp * params.fluid_cross_section;
  const double h_l = loss_coeff(params, t_mean, t_a);
  const double loss = params.loss_multiplier() * h_l * params.lumped_loss_area * (t_a - t_mean);
  const double gain =
      params.alpha_kopt * params.optical_efficiency * i_eff * params.aperture_area;
  const double advection = state.q * p_cp * (state.t_in - state.t_out);
  return (loss + gain + advection) / c_loop;
}

LumpedState lumped_step(const LoopParams& params, const LumpedState& state, double t_a,
                        double i_eff, double dt) {
  if (!(dt > 0.0)) throw DomainError("lumped_step: dt must be positive");
  if (!(state.q >= kFlowFloor)) throw DomainError("lumped_step: flow below floor");
  LumpedState next = state;
  next.t_out = state.t_out + dt * lumped_derivative(params, state, t_a, i_eff);
  check_sanity(next.t_out, "lumped_step");
  return next;
}

SegmentLayout SegmentLayout::proportional(const LoopParams& params, std::size_t n_segments,
                                          double segment_length) {
  if (n_segments == 0) throw DomainError("SegmentLayout: no segments");
  if (!(segment_length > 0.0)) throw DomainError("SegmentLayout: segment_length must be positive");
  const auto n_coll = static_cast<std::size_t>(params.n_collectors);
  const auto n_active = static_cast<std::size_t>(
      std::lround(static_cast<double>(n_segments) * params.active_length / params.loop_length));
  if (n_active < n_coll) throw DomainError("SegmentLayout: fewer active segments than collectors");

  // Passive slots: inlet, joints between collectors, outlet. Remainders go to
  // the inlet and outlet first.
  const std::size_t n_passive = n_segments - n_active;
  const std::size_t n_slots = n_coll + 1;
  std::vector<std::size_t> slot(n_slots, n_passive / n_slots);
  std::size_t rem = n_passive % n_slots;
  for (std::size_t k = 0; rem > 0; ++k, --rem) {
    const std::size_t idx = (k % 2 == 0) ? k / 2 : n_slots - 1 - k / 2;
    ++slot[idx];
  }

  SegmentLayout layout;
  layout.n_segments = n_segments;
  layout.segment_length = segment_length;
  layout.collector.reserve(n_segments);
  for (std::size_t c = 0; c < n_coll; ++c) {
    layout.collector.insert(layout.collector.end(), slot[c], -1);
    const std::size_t block = n_active / n_coll + (c < n_active % n_coll ? 1 : 0);
    layout.collector.insert(layout.collector.end(), block, static_cast<int>(c));
    layout.block_outlet.push_back(layout.collector.size() - 1);
  }
  layout.collector.insert(layout.collector.end(), slot[n_coll], -1);
  return layout;
}

DistributedState DistributedState::uniform(std::size_t n_segments, double temperature,
                                           double q) {
  return {std::vector<double>(n_segments, temperature),
          std::vector<double>(n_segments, temperature), q};
}

double courant_number(const LoopParams& params, const SegmentLayout& layout, double q,
                      double dt) {
  return q * dt / (params.fluid_cross_section * layout.segment_length);
}

double exchange_number(const LoopParams& params, double q, double t_f, double dt) {
  const double h_t = physics::convective_coeff(q * 3600.0, property_temperature(t_f));
  return dt * params.tube_perimeter * h_t /
         (params.metal.density * params.metal.heat_capacity * params.metal.cross_section);
}

DistributedState distributed_step(const LoopParams& params, const SegmentLayout& layout,
                                  const DistributedState& state, double t_a, double irradiance,
                                  double geometric_eff, std::span<const double> intercept_factors,
                                  double t_in, double dt) {
  const std::size_t n = layout.n_segments;
  if (state.t_fluid.size() != n || state.t_metal.size() != n) {
    throw DomainError("distributed_step: state size does not match layout");
  }
  if (intercept_factors.size() != static_cast<std::size_t>(params.n_collectors)) {
    throw DomainError("distributed_step: one intercept factor per collector required");
  }
  if (!(dt > 0.0)) throw DomainError("distributed_step: dt must be positive");
  if (!(state.q >= 0.0)) throw DomainError("distributed_step: negative flow");
  const double cfl = courant_number(params, layout, state.q, dt);
  if (cfl > 1.0) {
    throw StabilityError("distributed_step: Courant number " + std::to_string(cfl) +
                         " exceeds 1");
  }

  const double dx = layout.segment_length;
  const double a_f = params.fluid_cross_section;
  const double metal_capacity =
      params.metal.density * params.metal.heat_capacity * params.metal.cross_section;
  const double optical = params.alpha_kopt * geometric_eff * params.collector_aperture *
                         params.optical_efficiency * irradiance;
  const double q_per_hour = state.q * 3600.0;

  DistributedState next;
  next.q = state.q;
  next.t_fluid.resize(n);
  next.t_metal.resize(n);

  double upstream = rho_c(t_in) * t_in;
  for (std::size_t i = 0; i < n; ++i) {
    const double tf = state.t_fluid[i];
    const double tm = state.t_metal[i];
    const double pc = rho_c(tf);
    const double here = pc * tf;

    const double h_t = physics::convective_coeff(q_per_hour, property_temperature(tf));
    const double exchange = params.tube_perimeter * h_t * (tf - tm);  // W/m, metal gains
    const int c = layout.collector[i];
    const double absorbed = c >= 0 ? intercept_factors[static_cast<std::size_t>(c)] * optical : 0.0;
    const double loss = params.loss_multiplier() * loss_coeff(params, tm, t_a) *
                        params.collector_aperture * (t_a - tm);

    next.t_metal[i] = tm + dt * (absorbed + loss + exchange) / metal_capacity;
    next.t_fluid[i] = tf + dt * (state.q * (upstream - here) / dx - exchange) / (pc * a_f);
    upstream = here;

    check_sanity(next.t_metal[i], "distributed_step (metal)");
    check_sanity(next.t_fluid[i], "distributed_step (fluid)");
  }
  return next;
}

double thermal_power(double q, double t_in, double t_out, double penalty) {
  if (!(q >= 0.0)) throw DomainError("thermal_power: negative flow");
  if (q == 0.0) return 0.0;
  const double t_mean = property_temperature(0.5 * (t_in + t_out));
  return q * physics::fluid_density(t_mean) * physics::fluid_heat_capacity(t_mean) *
             (t_out - t_in) -
         penalty * q;
}

PowerReport field_power(std::span<const double> per_loop, double penalty_factor) {
  if (per_loop.empty()) throw DegenerateInputError("field_power: no loops");
  PowerReport report;
  report.per_loop.assign(per_loop.begin(), per_loop.end());
  report.total = std::accumulate(per_loop.begin(), per_loop.end(), 0.0);
  report.penalty_factor = penalty_factor;
  return report;
}

}  // namespace ptc::models
