#include "ptc/harness/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "ptc/errors.hpp"
#include "ptc/physics.hpp"
#include "ptc/random.hpp"
#include "ptc/text.hpp"

namespace ptc::harness {

std::string_view to_string(PlantKind k) {
  switch (k) {
    case PlantKind::static_model: return "static";
    case PlantKind::lumped: return "lumped";
    case PlantKind::distributed: return "distributed";
  }
  return "unknown";
}

std::string_view to_string(ControllerKind k) {
  switch (k) {
    case ControllerKind::none: return "none";
    case ControllerKind::auction: return "auction";
    case ControllerKind::ann: return "ann";
  }
  return "unknown";
}

PlantKind plant_from_string(std::string_view s) {
  if (s == "static") return PlantKind::static_model;
  if (s == "lumped") return PlantKind::lumped;
  if (s == "distributed") return PlantKind::distributed;
  throw ConfigError("unknown plant model '" + std::string(s) + "'");
}

ControllerKind controller_from_string(std::string_view s) {
  if (s == "none") return ControllerKind::none;
  if (s == "auction") return ControllerKind::auction;
  if (s == "ann") return ControllerKind::ann;
  throw ConfigError("unknown controller '" + std::string(s) + "'");
}

double FlowSchedule::total_flow(const models::LoopParams& reference, int n_loops, double i_eff,
                                double t_in) const {
  if (constant) return *constant;
  const double rho_c = physics::volumetric_heat_capacity(models::property_temperature(0.5 * (t_in + t_target)));
  const double q = static_cast<double>(n_loops) * design_alpha * reference.optical_efficiency *
                   std::max(i_eff, 0.0) * reference.aperture_area / (rho_c * (t_target - t_in));
  return std::clamp(q, q_min, q_max);
}

void FlowSchedule::validate() const {
  if (constant) {
    if (!(*constant > 0.0)) throw ConfigError("flow.constant must be positive");
    return;
  }
  if (!(design_alpha > 0.0 && q_min > 0.0 && q_max >= q_min)) {
    throw ConfigError("flow schedule needs design_alpha > 0 and 0 < q_min <= q_max");
  }
}

void Scenario::validate() const {
  if (loops.empty()) throw ConfigError("scenario has no loops");
  try {
    for (const auto& l : loops) l.validate();
    limits.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("scenario parameters: ") + e.what());
  }
  auction.validate();
  flow.validate();
  if (!flow.constant && !(flow.t_target > t_in)) throw ConfigError("flow.t_target must exceed t_in");
  if (!flow.constant && flow.q_min < static_cast<double>(loops.size()) * models::kFlowFloor) {
    throw ConfigError("flow.q_min is below the per-loop flow floor");
  }
  if (profile.size() < 2) throw ConfigError("scenario profile needs at least two samples");
  if (controller == ControllerKind::auction && plant == PlantKind::distributed) {
    throw ConfigError("the auction allocator runs only against the static or lumped plant");
  }
  if (!(distributed_dt > 0.0)) throw ConfigError("distributed_dt must be positive");
}

std::string Scenario::hash() const {
  std::ostringstream s;
  const auto num = [&](double v) { s << text::format_double(v) << ';'; };
  for (std::size_t i = 0; i < profile.size(); ++i) {
    num(profile.time_s[i]);
    num(profile.dni[i]);
    num(profile.t_ambient[i]);
    if (profile.has_geometry()) num(profile.n_o[i]);
  }
  num(latitude);
  s << day_of_year << ';';
  num(t_in);
  for (const auto& l : loops) {
    num(l.loop_length);
    num(l.active_length);
    num(l.aperture_area);
    num(l.optical_efficiency);
    num(l.alpha_kopt);
    num(l.alpha_hl);
    num(l.lumped_loss_area);
    num(l.fluid_cross_section);
  }
  if (flow.constant) {
    num(*flow.constant);
  } else {
    num(flow.design_alpha);
    num(flow.t_target);
    num(flow.q_min);
    num(flow.q_max);
  }
  s << to_string(plant) << ';';
  num(auction.ts1);
  num(auction.ts2);
  num(limits.lumped_max);
  for (double t : limits.collector_max) num(t);
  num(daylight_threshold);
  num(distributed_dt);
  s << seed;
  const std::string blob = s.str();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : blob) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void apply_faults(std::vector<models::LoopParams>& loops, std::span<const double> alpha_kopt,
                  std::span<const double> alpha_hl) {
  if (alpha_kopt.size() != loops.size() || alpha_hl.size() != loops.size()) {
    throw ConfigError("fault lists need one value per loop (" + std::to_string(loops.size()) + ")");
  }
  for (std::size_t i = 0; i < loops.size(); ++i) {
    loops[i].alpha_kopt = alpha_kopt[i];
    loops[i].alpha_hl = alpha_hl[i];
  }
}

void sample_faults(std::vector<models::LoopParams>& loops, const FaultRanges& r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ak(r.alpha_kopt_min, r.alpha_kopt_max);
  std::uniform_real_distribution<double> ah(r.alpha_hl_min, r.alpha_hl_max);
  for (auto& l : loops) {
    l.alpha_kopt = ak(rng);
    l.alpha_hl = ah(rng);
  }
}

void spread_faults(std::vector<models::LoopParams>& loops, double alpha_min) {
  const std::size_t n = loops.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double f = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 1.0;
    loops[i].alpha_kopt = alpha_min + (1.0 - alpha_min) * f;
    loops[i].alpha_hl = 1.0 - f;
  }
}

FaultRanges fault_ranges_from_config(const Config& cfg) {
  FaultRanges r;
  r.alpha_kopt_min = cfg.get_double("faults.alpha_kopt_min", r.alpha_kopt_min);
  r.alpha_kopt_max = cfg.get_double("faults.alpha_kopt_max", r.alpha_kopt_max);
  r.alpha_hl_min = cfg.get_double("faults.alpha_hl_min", r.alpha_hl_min);
  r.alpha_hl_max = cfg.get_double("faults.alpha_hl_max", r.alpha_hl_max);
  if (!(r.alpha_kopt_min > 0.0 && r.alpha_kopt_min <= r.alpha_kopt_max && r.alpha_kopt_max <= 1.0 &&
        r.alpha_hl_min >= 0.0 && r.alpha_hl_min <= r.alpha_hl_max && r.alpha_hl_max <= 1.0)) {
    throw ConfigError("fault ranges must satisfy 0 < kopt_min <= kopt_max <= 1 and 0 <= hl_min <= hl_max <= 1");
  }
  return r;
}

Scenario scenario_from_config(const Config& cfg) {
  Scenario s;
  s.name = cfg.get_string("name", s.name);
  s.seed = static_cast<std::uint64_t>(cfg.get_int("seed", static_cast<long long>(s.seed)));
  s.latitude = cfg.get_double("latitude", s.latitude);
  s.day_of_year = static_cast<int>(cfg.get_int("day_of_year", s.day_of_year));
  s.t_in = cfg.get_double("t_in", s.t_in);
  const long long n_loops = cfg.get_int("loops", 10);
  if (n_loops < 1 || n_loops > 1000) throw ConfigError("loops must be in [1, 1000]");
  s.loops.assign(static_cast<std::size_t>(n_loops), models::LoopParams{});

  if (cfg.has("profile")) {
    s.profile = load_profile(cfg.get_path("profile"));
  } else {
    ClearSkyOptions o;
    o.step_s = cfg.get_double("profile.step_s", o.step_s);
    const std::string kind = cfg.get_string("profile.synthetic", "clear");
    if (kind == "clear") {
      o.peak_dni = cfg.get_double("profile.peak_dni", o.peak_dni);
      s.profile = clear_sky_profile(o);
    } else {
      WeatherClass w{};
      if (kind == "sunny") {
        w = WeatherClass::sunny;
      } else if (kind == "partly_cloudy") {
        w = WeatherClass::partly_cloudy;
      } else if (kind == "cloudy") {
        w = WeatherClass::cloudy;
      } else {
        throw ConfigError("unknown profile.synthetic '" + kind + "'");
      }
      s.profile = synthetic_day(w, substream_seed(s.seed, "profile"), o);
    }
  }

  const std::string faults = cfg.get_string("faults", "none");
  const FaultRanges ranges = fault_ranges_from_config(cfg);
  if (faults == "spread") {
    spread_faults(s.loops, ranges.alpha_kopt_min);
  } else if (faults == "random") {
    auto rng = substream(s.seed, "faults");
    sample_faults(s.loops, ranges, rng);
  } else if (faults == "list") {
    apply_faults(s.loops, cfg.get_doubles("faults.alpha_kopt"), cfg.get_doubles("faults.alpha_hl"));
  } else if (faults != "none") {
    throw ConfigError("faults must be none, spread, random or list");
  }

  // The upstream controller is designed for the field's average optics.
  double mean_alpha = 0.0;
  for (const auto& l : s.loops) mean_alpha += l.alpha_kopt;
  s.flow.design_alpha = cfg.get_double("flow.design_alpha", mean_alpha / static_cast<double>(s.loops.size()));
  s.flow.t_target = cfg.get_double("flow.t_target", s.flow.t_target);
  s.flow.q_min = cfg.get_double("flow.q_min", s.flow.q_min);
  s.flow.q_max = cfg.get_double("flow.q_max", s.flow.q_max);
  if (cfg.has("flow.constant")) s.flow.constant = cfg.get_double("flow.constant");

  s.plant = plant_from_string(cfg.get_string("plant", "static"));
  s.controller = controller_from_string(cfg.get_string("controller", "none"));
  if (cfg.has("controller.model")) s.ann_model_path = cfg.get_path("controller.model").string();

  auto& a = s.auction;
  a.n_iterations = static_cast<int>(cfg.get_int("auction.iterations", a.n_iterations));
  a.n_valve_iterations = static_cast<int>(cfg.get_int("auction.valve_iterations", a.n_valve_iterations));
  a.delta_q = cfg.get_double("auction.delta_q", a.delta_q);
  a.gain = cfg.get_double("auction.gain", a.gain);
  a.valve_gain = cfg.get_double("auction.valve_gain", a.valve_gain);
  a.flow_unit = cfg.get_double("auction.flow_unit", a.flow_unit);
  a.exact_defocus = cfg.get_bool("auction.exact_defocus", a.exact_defocus);
  a.ts1 = cfg.get_double("timing.ts1", a.ts1);
  a.ts2 = cfg.get_double("timing.ts2", a.ts2);
  s.daylight_threshold = cfg.get_double("daylight_threshold", s.daylight_threshold);
  s.distributed_dt = cfg.get_double("distributed_dt", s.distributed_dt);
  s.limits.gain = cfg.get_double("defocus.gain", s.limits.gain);
  s.limits.deadband = cfg.get_double("defocus.deadband", s.limits.deadband);

  s.validate();
  if (s.controller == ControllerKind::ann && s.ann_model_path.empty()) {
    throw ConfigError("controller = ann needs controller.model");
  }
  return s;
}

}  // namespace ptc::harness
