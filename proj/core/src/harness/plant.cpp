#include "ptc/harness/plant.hpp"

#include <algorithm>
#include <cmath>

#include "ptc/errors.hpp"

namespace ptc::harness {
namespace {

void check_flows(std::span<const double> flows, std::size_t n) {
  if (flows.size() != n) throw DomainError("plant: expected one flow per loop");
}

}  // namespace

Plant::Plant(std::vector<models::LoopParams> loops, defocus::DefocusLimits limits, double t_init)
    : loops_(std::move(loops)),
      limits_(limits),
      t_out_(loops_.size(), t_init),
      intercept_(loops_.size(), 1.0) {}

StaticPlant::StaticPlant(std::vector<models::LoopParams> loops, defocus::DefocusLimits limits, double t_init)
    : Plant(std::move(loops), limits, t_init) {}

void StaticPlant::advance(std::span<const double> flows, const Conditions& c, double) {
  check_flows(flows, n_loops());
  last_excess_ = -INFINITY;
  for (std::size_t i = 0; i < n_loops(); ++i) {
    const auto r = defocus::lumped_defocus(loops_[i], c.t_in, c.t_a, c.i_eff(), flows[i], {}, limits_.lumped_max);
    t_out_[i] = r.t_out;
    intercept_[i] = r.intercept_factor;
    last_excess_ = std::max(last_excess_, r.t_out - limits_.lumped_max);
  }
}

LumpedPlant::LumpedPlant(std::vector<models::LoopParams> loops, defocus::DefocusLimits limits, double t_init,
                         double max_substep)
    : Plant(std::move(loops), limits, t_init), max_substep_(max_substep) {}

void LumpedPlant::advance(std::span<const double> flows, const Conditions& c, double dt) {
  check_flows(flows, n_loops());
  const int n = std::max(1, static_cast<int>(std::ceil(dt / max_substep_ - 1e-9)));
  const double h = dt / n;
  last_excess_ = -INFINITY;
  for (std::size_t i = 0; i < n_loops(); ++i) {
    models::LumpedState s{t_out_[i], c.t_in, flows[i]};
    double f = intercept_[i];
    for (int k = 0; k < n; ++k) {
      const auto r = defocus::lumped_defocus_step(loops_[i], s, c.t_a, c.i_eff(), h, limits_.lumped_max);
      s = r.state;
      f = r.intercept_factor;
      last_excess_ = std::max(last_excess_, s.t_out - limits_.lumped_max);
    }
    t_out_[i] = s.t_out;
    intercept_[i] = f;
  }
}

DistributedPlant::DistributedPlant(std::vector<models::LoopParams> loops, defocus::DefocusLimits limits,
                                   double t_init, double base_dt)
    : Plant(std::move(loops), limits, t_init), base_dt_(base_dt) {
  layout_ = models::SegmentLayout::proportional(loops_.front());
  for (std::size_t i = 0; i < n_loops(); ++i) {
    states_.push_back(models::DistributedState::uniform(layout_.n_segments, t_init, models::kFlowFloor));
  }
  raw_if_.assign(n_loops(), {1.0, 1.0, 1.0, 1.0});
  filtered_if_.assign(n_loops(), {1.0, 1.0, 1.0, 1.0});
}

void DistributedPlant::advance(std::span<const double> flows, const Conditions& c, double dt) {
  check_flows(flows, n_loops());
  const int n_base = std::max(1, static_cast<int>(std::ceil(dt / base_dt_ - 1e-9)));
  const double h_base = dt / n_base;
  last_excess_ = -INFINITY;
  for (std::size_t i = 0; i < n_loops(); ++i) {
    const auto& p = loops_[i];
    auto& st = states_[i];
    st.q = flows[i];
    const double t_hot = *std::max_element(st.t_fluid.begin(), st.t_fluid.end());
    // Stability: Courant <= 1 and exchange number < 1 with some margin.
    const double cfl = models::courant_number(p, layout_, st.q, h_base);
    const double ex = models::exchange_number(p, st.q, std::clamp(t_hot + 50.0, 0.0, 450.0), h_base);
    const int m = std::max({1, static_cast<int>(std::ceil(cfl - 1e-12)), static_cast<int>(std::ceil(ex / 0.5))});
    const double h = h_base / m;
    for (int k = 0; k < n_base * m; ++k) {
      st = models::distributed_step(p, layout_, st, c.t_a, c.dni, c.n_o, raw_if_[i], c.t_in, h);
      raw_if_[i] = defocus::collector_defocus_step(st, layout_, limits_, raw_if_[i], h);
      for (std::size_t b = 0; b < 4; ++b) {
        filtered_if_[i][b] = defocus::filter_if(raw_if_[i][b], filtered_if_[i][b], h);
        last_excess_ = std::max(last_excess_, st.t_fluid[layout_.block_outlet[b]] - limits_.collector_max[b]);
      }
    }
    t_out_[i] = st.t_fluid.back();
    double f = 0.0;
    for (double v : filtered_if_[i]) f += v;
    intercept_[i] = f / 4.0;
  }
}

std::unique_ptr<Plant> make_plant(const Scenario& s) {
  switch (s.plant) {
    case PlantKind::static_model: return std::make_unique<StaticPlant>(s.loops, s.limits, s.t_in);
    case PlantKind::lumped: return std::make_unique<LumpedPlant>(s.loops, s.limits, s.t_in);
    case PlantKind::distributed:
      return std::make_unique<DistributedPlant>(s.loops, s.limits, s.t_in, s.distributed_dt);
  }
  throw ConfigError("unknown plant kind");
}

}  // namespace ptc::harness
