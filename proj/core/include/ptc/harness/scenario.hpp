#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ptc/auction.hpp"
#include "ptc/defocus.hpp"
#include "ptc/harness/config.hpp"
#include "ptc/harness/profile.hpp"
#include "ptc/models.hpp"

namespace ptc::harness {

enum class PlantKind { static_model, lumped, distributed };
enum class ControllerKind { none, auction, ann };

std::string_view to_string(PlantKind k);
std::string_view to_string(ControllerKind k);
PlantKind plant_from_string(std::string_view s);
ControllerKind controller_from_string(std::string_view s);

// Total sector flow Q(t). The upstream flow controller is not part of the
// model, so by default Q is a feedforward estimate of the flow that would
// bring a loop with the design optical fault to t_target, clamped to
// [q_min, q_max]. A constant Q can be set instead.
struct FlowSchedule {
  double design_alpha = 0.925;
  double t_target = 395.0;  // degC
  double q_min = 0.02;      // m^3/s, whole sector
  double q_max = 0.2;
  std::optional<double> constant;

  double total_flow(const models::LoopParams& reference, int n_loops, double i_eff, double t_in) const;
  void validate() const;
};

struct FaultRanges {
  double alpha_kopt_min = 0.85, alpha_kopt_max = 1.0;
  double alpha_hl_min = 0.0, alpha_hl_max = 1.0;
};

struct Scenario {
  std::string name = "scenario";
  Profile profile;
  double latitude = 32.95;  // deg
  int day_of_year = 172;
  double t_in = 293.0;      // degC, loop inlet
  std::vector<models::LoopParams> loops = std::vector<models::LoopParams>(10);
  FlowSchedule flow;
  PlantKind plant = PlantKind::static_model;
  ControllerKind controller = ControllerKind::none;
  std::string ann_model_path;
  auction::AuctionConfig auction;  // also carries ts1 / ts2
  defocus::DefocusLimits limits;
  double daylight_threshold = 10.0;  // W/m^2 DNI
  double distributed_dt = 0.25;      // s
  std::uint64_t seed = 1;

  // Throws ConfigError.
  void validate() const;
  // Digest of everything that shapes the plant's inputs: profile, site,
  // loops, flow schedule, plant, timing, limits and seed. The controller is
  // excluded so runs that differ only in control compare as equal.
  std::string hash() const;
};

void apply_faults(std::vector<models::LoopParams>& loops, std::span<const double> alpha_kopt,
                  std::span<const double> alpha_hl);
// Draws per-loop faults uniformly from the ranges.
void sample_faults(std::vector<models::LoopParams>& loops, const FaultRanges& ranges, std::mt19937_64& rng);

// Evenly spaced optical faults from alpha_min to 1 and loss faults from 1
// down to 0: a reproducible heterogeneous field.
void spread_faults(std::vector<models::LoopParams>& loops, double alpha_min = 0.85);

// faults.alpha_kopt_min/max and faults.alpha_hl_min/max, defaults otherwise.
FaultRanges fault_ranges_from_config(const Config& cfg);

// Builds a scenario from a config. Recognised keys include
//   name, seed, latitude, day_of_year, t_in, loops
//   profile (CSV path) or profile.synthetic = sunny|partly_cloudy|cloudy|clear
//   profile.peak_dni, profile.step_s
//   faults = none|spread|random, faults.alpha_kopt, faults.alpha_hl (lists)
//   faults.alpha_kopt_min/max, faults.alpha_hl_min/max
//   flow.constant, flow.design_alpha, flow.t_target, flow.q_min, flow.q_max
//   plant = static|lumped|distributed
//   controller = none|auction|ann, controller.model
//   auction.iterations, auction.valve_iterations, auction.delta_q,
//   auction.gain, auction.valve_gain, auction.flow_unit, auction.exact_defocus
//   timing.ts1, timing.ts2, daylight_threshold, distributed_dt
//   defocus.gain, defocus.deadband
Scenario scenario_from_config(const Config& cfg);

}  // namespace ptc::harness
