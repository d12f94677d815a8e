#pragma once

// Plant representations for one loop of four parabolic trough collectors:
// the static lumped balance, its dynamic counterpart, and a distributed
// metal/fluid model discretised along the loop. Flows are volumetric in m^3/s,
// powers in W, temperatures in degC.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ptc::models {

// Smallest flow any loop may carry.
inline constexpr double kFlowFloor = 1e-6;
// Flow penalty of the net thermal power, W per m^3/s.
inline constexpr double kPenaltyFactor = 3000.0;
// Sanity band for simulated temperatures.
inline constexpr double kSanityMin = -20.0;
inline constexpr double kSanityMax = 500.0;

struct MetalProperties {
  // Steel absorber tube. These are literature defaults and are expected to be
  // set from the plant configuration.
  double density = 7800.0;          // kg/m^3
  double heat_capacity = 550.0;     // J/(kg degC)
  double cross_section = 2.1677e-4; // m^2
};

struct LoopParams {
  double loop_length = 620.0;        // m
  double active_length = 593.0;      // m, receives irradiance
  double aperture_area = 3415.5;     // S, m^2
  double optical_efficiency = 0.75;  // K_opt
  double alpha_kopt = 1.0;           // optical fault multiplier, (0, 1]
  double alpha_hl = 1.0;             // loss fault, loss multiplier is (2 - alpha_hl)
  int n_collectors = 4;
  MetalProperties metal{};
  double fluid_cross_section = 0.0036;  // A_f, m^2
  double collector_aperture = 5.75;     // G, m
  double tube_perimeter = 0.2136;       // L, m
  // Loss area A of the lumped balance. 0.8 m^2 is the value under which the
  // closed-form static outlet is the steady state of the lumped ODE.
  double lumped_loss_area = 0.8;
  // Replaces H_l(T) everywhere when set. Test hook.
  std::optional<double> loss_coeff_override{};

  // Throws DomainError when a constant is non-positive or a fault multiplier
  // is outside its range.
  void validate() const;
  double loss_multiplier() const { return 2.0 - alpha_hl; }
};

// Temperature at which fluid properties are evaluated: the argument clamped
// to the correlation range. Transient solver iterates may leave the range.
double property_temperature(double t);

// H_l used by the models: the override if present, else bounded_loss_coeff.
double loss_coeff(const LoopParams& params, double t_f, double t_a);

struct LumpedState {
  double t_out;  // degC
  double t_in;   // degC
  double q;      // m^3/s
};

struct StaticOptions {
  double tolerance = 1e-3;  // degC on successive outlet iterates
  int max_iterations = 50;
};

// Closed-form steady outlet of the lumped loop, solved by fixed-point
// iteration on the mean temperature because H_l and rho*C depend on it.
// i_eff is n_o * I, possibly already scaled by an intercept factor.
double static_outlet(const LoopParams& params, double t_in, double t_a, double i_eff,
                     double q, const StaticOptions& options = {});

// Right-hand side dT_out/dt of the lumped balance.
double lumped_derivative(const LoopParams& params, const LumpedState& state, double t_a,
                         double i_eff);

// One explicit Euler step of the lumped balance.
LumpedState lumped_step(const LoopParams& params, const LumpedState& state, double t_a,
                        double i_eff, double dt);

// Maps the discretised loop onto collectors. Segments with collector -1 are
// passive piping (no irradiance).
struct SegmentLayout {
  std::size_t n_segments = 0;
  double segment_length = 0.0;
  std::vector<int> collector;             // per segment, -1 = passive
  std::vector<std::size_t> block_outlet;  // last segment of each collector

  // Active segments are the fraction active_length/loop_length of the grid,
  // split evenly among the collectors; the passive remainder sits at the
  // inlet, the joints and the outlet.
  static SegmentLayout proportional(const LoopParams& params, std::size_t n_segments = 151,
                                    double segment_length = 3.213);
};

struct DistributedState {
  std::vector<double> t_fluid;  // degC per segment
  std::vector<double> t_metal;  // degC per segment
  double q = kFlowFloor;        // m^3/s

  static DistributedState uniform(std::size_t n_segments, double temperature, double q);
};

// q * dt / (A_f * dx).
double courant_number(const LoopParams& params, const SegmentLayout& layout, double q,
                      double dt);

// Metal-fluid exchange number dt * L * H_t / (rho_m C_m A_m) at the given
// flow and temperature. The explicit metal update needs it below 1.
double exchange_number(const LoopParams& params, double q, double t_f, double dt);

// Advances the distributed model by dt. Metal balance per segment; fluid
// advected with first-order upwind in conservative (rho*C*T) form, the inlet
// ghost cell held at t_in. Collector c's active segments receive irradiance
// scaled by intercept_factors[c].
DistributedState distributed_step(const LoopParams& params, const SegmentLayout& layout,
                                  const DistributedState& state, double t_a,
                                  double irradiance, double geometric_eff,
                                  std::span<const double> intercept_factors, double t_in,
                                  double dt = 0.25);

// Net thermal power of one loop, properties evaluated at the loop mean
// temperature, minus the flow penalty k*q.
double thermal_power(double q, double t_in, double t_out, double penalty = kPenaltyFactor);

struct PowerReport {
  std::vector<double> per_loop;  // W
  double total = 0.0;            // W
  double penalty_factor = kPenaltyFactor;
};

PowerReport field_power(std::span<const double> per_loop,
                        double penalty_factor = kPenaltyFactor);

}  // namespace ptc::models
