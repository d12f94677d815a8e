#include "ptc/harness/simulation.hpp"

#include <chrono>
#include <cmath>
#include <exception>

#include "ptc/ann/model_io.hpp"
#include "ptc/errors.hpp"
#include "ptc/harness/plant.hpp"
#include "ptc/physics.hpp"

namespace ptc::harness {

std::vector<double> AuctionController::update(const ControlContext& ctx) {
  const auto& obs = ctx.observation;
  const auction::StaticPredictor predictor(loops_, obs.t_in, obs.t_a, ctx.i_eff, {}, cfg_.exact_defocus);
  const std::vector<double> flows = auction::allocate(obs.apertures, ctx.total_flow, cfg_, predictor);
  return auction::valves_from_flows(flows, ctx.total_flow, cfg_).valves.apertures;
}

std::vector<double> AnnController::update(const ControlContext& ctx) {
  ann::InferenceDiagnostics diag;
  auto v = ann::infer_apertures(*model_, ctx.observation, &diag);
  clamped_ += diag.clamped_features;
  return v;
}

std::unique_ptr<FieldController> make_controller(const Scenario& s, const RunOptions& options) {
  switch (s.controller) {
    case ControllerKind::none: return std::make_unique<NoAllocation>();
    case ControllerKind::auction: return std::make_unique<AuctionController>(s.loops, s.auction);
    case ControllerKind::ann: {
      auto model = options.model;
      if (!model && s.ann_model_path.empty()) throw ConfigError("controller = ann needs a model");
      if (!model) model = std::make_shared<const ann::ImitationModel>(ann::load_model(s.ann_model_path));
      const auto n = static_cast<int>(s.loops.size());
      if (model->net.input_size() != ann::feature_count(n) || model->net.output_size() != n) {
        throw ConfigError("ANN model does not match a field of " + std::to_string(n) + " loops");
      }
      return std::make_unique<AnnController>(std::move(model));
    }
  }
  throw ConfigError("unknown controller kind");
}

RunMetrics run_scenario(const Scenario& s, const RunOptions& options) {
  s.validate();
  RunMetrics m;
  m.scenario_name = s.name;
  m.scenario_hash = s.hash();
  m.controller = std::string(to_string(s.controller));
  m.plant = std::string(to_string(s.plant));
  m.seed = s.seed;
  m.daylight_threshold = s.daylight_threshold;

  const std::size_t n = s.loops.size();
  const double duration = s.profile.end() - s.profile.start();
  const double ts1 = s.auction.ts1;
  const int ticks = static_cast<int>(std::floor(duration / ts1 + 1e-9));
  const int max_calls = static_cast<int>(std::floor(duration / s.auction.ts2 + 1e-9));
  const int ratio = static_cast<int>(std::lround(s.auction.ts2 / ts1));

  auto plant = make_plant(s);
  auto controller = make_controller(s, options);
  std::vector<double> apertures(n, 1.0);

  // Means run over daylight ticks; a day without any falls back to all ticks.
  double sum_power = 0.0, sum_if = 0.0, sum_spread = 0.0, sum_ctrl_time = 0.0;
  double all_power = 0.0, all_if = 0.0, all_spread = 0.0;
  int all_ticks = 0;
  m.max_t_out = -INFINITY;
  m.max_limit_excess = -INFINITY;

  for (int k = 0; k < ticks; ++k) {
    const double t = s.profile.start() + k * ts1;
    const ProfilePoint pt = sample(s.profile, t);
    Conditions c;
    c.t_in = s.t_in;
    c.t_a = pt.t_ambient;
    c.dni = pt.dni;
    if (s.profile.has_geometry()) {
      c.n_o = pt.n_o;
    } else {
      const auto ang = physics::solar_angles(s.day_of_year, t / 3600.0);
      c.n_o = physics::geometric_efficiency(s.latitude, ang.declination, ang.hour_angle);
    }
    const double q_total = s.flow.total_flow(s.loops.front(), static_cast<int>(n), c.i_eff(), s.t_in);
    const std::vector<double> flows = auction::flows_from_valves(apertures, q_total);
    ++m.flow_splits;
    double q_sum = 0.0;
    for (double q : flows) q_sum += q;
    m.max_flow_mismatch = std::max(m.max_flow_mismatch, std::abs(q_sum - q_total) / q_total);

    try {
      plant->advance(flows, c, ts1);
    } catch (const std::exception& e) {
      m.completed = false;
      m.failure_time_s = t;
      m.failure = e.what();
      break;
    }

    TickRecord r;
    r.time_s = t;
    r.dni = c.dni;
    r.i_eff = c.i_eff();
    r.t_ambient = c.t_a;
    r.total_flow = q_total;
    r.t_out = plant->t_out();
    r.flow = flows;
    r.aperture = apertures;
    r.intercept = plant->intercept();
    r.power.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      r.power[i] = models::thermal_power(flows[i], s.t_in, r.t_out[i]);
      r.total_power += r.power[i];
      m.max_t_out = std::max(m.max_t_out, r.t_out[i]);
    }
    m.max_limit_excess = std::max(m.max_limit_excess, plant->last_excess());
    r.spread = population_std(r.t_out);

    double mean_if = 0.0;
    for (double x : r.intercept) mean_if += x;
    mean_if /= static_cast<double>(n);
    ++all_ticks;
    all_power += r.total_power;
    all_if += mean_if;
    all_spread += r.spread;
    if (c.dni > s.daylight_threshold) {
      ++m.daylight_ticks;
      sum_power += r.total_power;
      sum_if += mean_if;
      sum_spread += r.spread;
    }

    if (k % ratio == 0 && m.controller_calls < max_calls) {
      ControlContext ctx;
      ctx.observation.t_in = s.t_in;
      ctx.observation.t_a = c.t_a;
      ctx.observation.irradiance_no = c.i_eff();
      ctx.observation.t_out = r.t_out;
      ctx.observation.intercept = r.intercept;
      ctx.observation.apertures = apertures;
      ctx.total_flow = q_total;
      ctx.i_eff = c.i_eff();
      const auto t0 = std::chrono::steady_clock::now();
      std::vector<double> next;
      try {
        next = controller->update(ctx);
      } catch (const std::exception& e) {
        m.completed = false;
        m.failure_time_s = t;
        m.failure = std::string("controller: ") + e.what();
        if (options.keep_trace) m.trace.push_back(std::move(r));
        break;
      }
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      sum_ctrl_time += elapsed;
      m.controller_time_max_s = std::max(m.controller_time_max_s, elapsed);
      if (options.on_control) {
        ControllerEvent ev;
        ev.call = m.controller_calls;
        ev.time_s = t;
        ev.context = &ctx;
        ev.next_apertures = &next;
        options.on_control(ev);
      }
      ++m.controller_calls;
      apertures = std::move(next);
    }
    if (options.keep_trace) m.trace.push_back(std::move(r));
  }

  if (m.daylight_ticks > 0) {
    const double d = m.daylight_ticks;
    m.mean_power_mw = sum_power / d / 1e6;
    m.mean_intercept_pct = 100.0 * sum_if / d;
    m.mean_spread = sum_spread / d;
  } else if (all_ticks > 0) {
    const double d = all_ticks;
    m.mean_power_mw = all_power / d / 1e6;
    m.mean_intercept_pct = 100.0 * all_if / d;
    m.mean_spread = all_spread / d;
  }
  if (m.controller_calls > 0) m.controller_time_mean_s = sum_ctrl_time / m.controller_calls;
  return m;
}

}  // namespace ptc::harness
