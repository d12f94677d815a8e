#pragma once

// Market-based allocation of a sector's total flow among its loops. Every
// loop bids with the predicted power change of a virtual flow increase
// (demand) and decrease (supply); an auction price set from all bids decides
// which loops gain or give up flow. Valve apertures are obtained from the
// resulting flows by an iterative inversion of the proportional split.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ptc/models.hpp"

namespace ptc::auction {

struct AuctionConfig {
  int n_iterations = 10;          // N_it, auction rounds per invocation
  int n_valve_iterations = 150;   // N_it,v
  double delta_q = 1.0;           // probe quantum, in flow units
  double gain = 1e-5;             // K, flow units per W
  double valve_gain = 0.25;       // K_v
  double q_floor = models::kFlowFloor;  // m^3/s
  // m^3/s per flow unit. delta_q, gain and the bid prices are expressed in
  // this unit. The default is m^3/h, the unit of the receiver correlation;
  // with m^3/s the unit quantum dwarfs a loop's flow and the rule never fires.
  double flow_unit = 1.0 / 3600.0;
  // The predictor caps each loop at 392 degC with the exact IF rather than
  // the 0.01 grid. Grid steps make the predicted power jump by ~1% of a
  // loop's output, which swamps the marginal values the bids are made of.
  bool exact_defocus = true;
  double ts1 = 30.0;   // flow split period, s
  double ts2 = 180.0;  // auction period, s

  void validate() const;
};

struct ProbeFlows {
  double plus;
  double minus;
};

// Virtual flows q +/- delta_q in flow units; the minus branch saturates at
// the floor (q_floor / flow_unit).
ProbeFlows probe_flows(double q, const AuctionConfig& cfg);

// Predicts the net power (W) of one loop at a given flow (m^3/s).
class LoopPowerPredictor {
 public:
  virtual ~LoopPowerPredictor() = default;
  virtual std::size_t n_loops() const = 0;
  virtual double predict(std::size_t loop, double q) const = 0;
};

// Static model with the 392 degC defocus as the power oracle: the default
// predictor of the allocator. exact_defocus selects the continuous IF.
class StaticPredictor final : public LoopPowerPredictor {
 public:
  StaticPredictor(std::span<const models::LoopParams> loops, double t_in, double t_a,
                  double i_eff, models::StaticOptions options = {}, bool exact_defocus = true);
  std::size_t n_loops() const override { return loops_.size(); }
  double predict(std::size_t loop, double q) const override;

 private:
  std::span<const models::LoopParams> loops_;
  double t_in_;
  double t_a_;
  double i_eff_;
  models::StaticOptions options_;
  bool exact_defocus_;
};

enum class Decision { hold, increase, decrease };

struct LoopBid {
  double q = 0.0;  // flow units
  double p = 0.0, p_plus = 0.0, p_minus = 0.0;  // W
  double p_demand = 0.0, p_supply = 0.0;        // W
  double c_demand = 0.0, c_supply = 0.0;        // W per flow unit
};

struct AuctionBook {
  std::vector<LoopBid> loops;
  double auction_price = 0.0;  // W per flow unit
};

// Fills the per-loop bids: probe, predict three powers, form demand/supply
// powers and prices. Does not set the auction price.
AuctionBook collect_bids(std::span<const double> flows, const AuctionConfig& cfg,
                         const LoopPowerPredictor& predictor);

// Average of all demand and supply powers over 2 * N * delta_q.
double auction_price(const AuctionBook& book, const AuctionConfig& cfg);

// Three-way rule: increase iff c_demand > price and P+ beats both P and P-;
// decrease iff c_supply > price and P- beats both; otherwise hold.
Decision decide(const LoopBid& bid, double auction_price);

struct RoundResult {
  std::vector<double> flows;  // m^3/s
  AuctionBook book;
  std::vector<Decision> decisions;
  bool ok = true;
  std::string error;
};

// One auction round on flows (m^3/s) summing to total_flow. The new flows are
// saturated to [q_floor, total_flow] and rescaled to sum to total_flow. A
// predictor failure aborts the round: ok = false and the input flows are
// returned unchanged.
RoundResult auction_round(std::span<const double> flows, double total_flow,
                          const AuctionConfig& cfg, const LoopPowerPredictor& predictor);

// Initial flows from the apertures, then cfg.n_iterations rounds. Throws
// NumericalError if a round fails.
std::vector<double> allocate(std::span<const double> apertures, double total_flow,
                             const AuctionConfig& cfg, const LoopPowerPredictor& predictor);

struct ValveSet {
  std::vector<double> apertures;  // (0, 1]
};

// q_i = Q v_i / sum_j v_j. Throws DegenerateInputError when sum v <= 0.
std::vector<double> flows_from_valves(std::span<const double> apertures, double total_flow);

struct ValveInversion {
  ValveSet valves;
  double residual = 0.0;  // max_i |q~_i - q_i| / Q
  bool converged = true;  // residual within 1% of Q
};

// Iterative inversion of flows_from_valves. The loop with the largest target
// is pinned at 1; the others move by valve_gain times the flow error
// measured in units of the mean loop flow Q/N.
ValveInversion valves_from_flows(std::span<const double> target_flows, double total_flow,
                                 const AuctionConfig& cfg);

}  // namespace ptc::auction
