#include "ptc/auction.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "ptc/defocus.hpp"
#include "ptc/errors.hpp"

namespace ptc::auction {
namespace {

// Sum in sorted order so the result does not depend on loop ordering.
double ordered_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

void saturate_and_rescale(std::vector<double>& flows, double total_flow, double floor) {
  for (double& q : flows) q = std::clamp(q, floor, total_flow);
  const double scale = total_flow / ordered_sum(flows);
  for (double& q : flows) q *= scale;
}

}  // namespace

void AuctionConfig::validate() const {
  if (n_iterations < 0) throw ConfigError("AuctionConfig: n_iterations must be >= 0");
  if (n_valve_iterations < 0) throw ConfigError("AuctionConfig: n_valve_iterations must be >= 0");
  if (!(delta_q > 0.0 && gain > 0.0 && valve_gain > 0.0 && q_floor > 0.0 && flow_unit > 0.0)) {
    throw ConfigError("AuctionConfig: gains, quantum, floor and flow unit must be positive");
  }
  if (!(q_floor < delta_q * flow_unit)) {
    throw ConfigError("AuctionConfig: q_floor must be below the probe quantum");
  }
  if (!(ts1 > 0.0 && ts2 > 0.0)) throw ConfigError("AuctionConfig: sample times must be positive");
  const double ratio = ts2 / ts1;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0) {
    throw ConfigError("AuctionConfig: ts2 must be an integer multiple of ts1");
  }
}

ProbeFlows probe_flows(double q, const AuctionConfig& cfg) {
  const double floor = cfg.q_floor / cfg.flow_unit;
  return {q + cfg.delta_q, std::max(q - cfg.delta_q, floor)};
}

StaticPredictor::StaticPredictor(std::span<const models::LoopParams> loops, double t_in,
                                 double t_a, double i_eff, models::StaticOptions options,
                                 bool exact_defocus)
    : loops_(loops), t_in_(t_in), t_a_(t_a), i_eff_(i_eff), options_(options),
      exact_defocus_(exact_defocus) {}

double StaticPredictor::predict(std::size_t loop, double q) const {
  const auto r = exact_defocus_
                     ? defocus::lumped_defocus_exact(loops_[loop], t_in_, t_a_, i_eff_, q, options_)
                     : defocus::lumped_defocus(loops_[loop], t_in_, t_a_, i_eff_, q, options_);
  return models::thermal_power(q, t_in_, r.t_out);
}

AuctionBook collect_bids(std::span<const double> flows, const AuctionConfig& cfg,
                         const LoopPowerPredictor& predictor) {
  AuctionBook book;
  book.loops.resize(flows.size());
  for (std::size_t i = 0; i < flows.size(); ++i) {
    LoopBid& bid = book.loops[i];
    bid.q = flows[i] / cfg.flow_unit;
    const ProbeFlows probe = probe_flows(bid.q, cfg);
    bid.p = predictor.predict(i, flows[i]);
    bid.p_plus = predictor.predict(i, probe.plus * cfg.flow_unit);
    bid.p_minus = predictor.predict(i, probe.minus * cfg.flow_unit);
    bid.p_demand = bid.p_plus - bid.p;
    bid.p_supply = bid.p_minus - bid.p;
    bid.c_demand = bid.p_demand / cfg.delta_q;
    bid.c_supply = bid.p_supply / cfg.delta_q;
  }
  return book;
}

double auction_price(const AuctionBook& book, const AuctionConfig& cfg) {
  if (book.loops.empty()) throw DegenerateInputError("auction_price: no loops");
  std::vector<double> powers;
  powers.reserve(2 * book.loops.size());
  for (const auto& bid : book.loops) {
    powers.push_back(bid.p_demand);
    powers.push_back(bid.p_supply);
  }
  return ordered_sum(std::move(powers)) /
         (2.0 * static_cast<double>(book.loops.size()) * cfg.delta_q);
}

Decision decide(const LoopBid& bid, double price) {
  if (bid.c_demand > price && bid.p_plus > bid.p && bid.p_plus > bid.p_minus) {
    return Decision::increase;
  }
  if (bid.c_supply > price && bid.p_minus > bid.p && bid.p_minus > bid.p_plus) {
    return Decision::decrease;
  }
  return Decision::hold;
}

RoundResult auction_round(std::span<const double> flows, double total_flow,
                          const AuctionConfig& cfg, const LoopPowerPredictor& predictor) {
  RoundResult result;
  result.flows.assign(flows.begin(), flows.end());
  if (flows.size() != predictor.n_loops()) {
    result.ok = false;
    result.error = "auction_round: flow count does not match predictor";
    return result;
  }
  try {
    result.book = collect_bids(flows, cfg, predictor);
  } catch (const std::exception& e) {
    result.ok = false;
    result.error = std::string("auction_round: predictor failed: ") + e.what();
    return result;
  }
  result.book.auction_price = auction_price(result.book, cfg);
  const double price = result.book.auction_price;

  std::vector<double> next(flows.size());
  result.decisions.resize(flows.size());
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const LoopBid& bid = result.book.loops[i];
    const Decision d = decide(bid, price);
    result.decisions[i] = d;
    double q = bid.q;
    if (d == Decision::increase) {
      q += cfg.gain * (bid.p_demand - price);
    } else if (d == Decision::decrease) {
      q -= cfg.gain * (bid.p_supply - price);
    }
    next[i] = q * cfg.flow_unit;
  }
  // Held loops keep their flow bit-for-bit before rescaling.
  for (std::size_t i = 0; i < flows.size(); ++i) {
    if (result.decisions[i] == Decision::hold) next[i] = flows[i];
  }
  if (std::all_of(result.decisions.begin(), result.decisions.end(),
                  [](Decision d) { return d == Decision::hold; })) {
    return result;
  }
  saturate_and_rescale(next, total_flow, cfg.q_floor);
  result.flows = std::move(next);
  return result;
}

std::vector<double> allocate(std::span<const double> apertures, double total_flow,
                             const AuctionConfig& cfg, const LoopPowerPredictor& predictor) {
  std::vector<double> flows = flows_from_valves(apertures, total_flow);
  for (int it = 0; it < cfg.n_iterations; ++it) {
    RoundResult round = auction_round(flows, total_flow, cfg, predictor);
    if (!round.ok) {
      throw NumericalError("allocate: round " + std::to_string(it) + " failed: " + round.error,
                           static_cast<double>(it));
    }
    flows = std::move(round.flows);
  }
  return flows;
}

std::vector<double> flows_from_valves(std::span<const double> apertures, double total_flow) {
  if (apertures.empty()) throw DegenerateInputError("flows_from_valves: no valves");
  std::vector<double> v(apertures.begin(), apertures.end());
  const double sum = ordered_sum(v);
  if (!(sum > 0.0)) throw DegenerateInputError("flows_from_valves: all apertures are zero");
  for (double& x : v) x = total_flow * x / sum;
  return v;
}

ValveInversion valves_from_flows(std::span<const double> target_flows, double total_flow,
                                 const AuctionConfig& cfg) {
  const std::size_t n = target_flows.size();
  if (n == 0) throw DegenerateInputError("valves_from_flows: no flows");
  if (!(total_flow > 0.0)) throw DegenerateInputError("valves_from_flows: total flow must be positive");

  constexpr double kMinAperture = 1e-9;
  const double mean_flow = total_flow / static_cast<double>(n);
  const auto pinned = static_cast<std::size_t>(
      std::distance(target_flows.begin(), std::max_element(target_flows.begin(), target_flows.end())));

  std::vector<double> v(n, 1.0);
  for (int it = 0; it < cfg.n_valve_iterations; ++it) {
    const std::vector<double> induced = flows_from_valves(v, total_flow);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == pinned) continue;
      v[i] += cfg.valve_gain * (target_flows[i] - induced[i]) / mean_flow;
      v[i] = std::clamp(v[i], kMinAperture, 1.0);
    }
  }

  ValveInversion out;
  const std::vector<double> induced = flows_from_valves(v, total_flow);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(induced[i] - target_flows[i]) / total_flow);
  }
  out.valves.apertures = std::move(v);
  out.residual = worst;
  out.converged = worst <= 0.01;
  return out;
}

}  // namespace ptc::auction
