#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "ptc/ann/dataset.hpp"
#include "ptc/ann/imitation.hpp"
#include "ptc/auction.hpp"
#include "ptc/harness/metrics.hpp"
#include "ptc/harness/scenario.hpp"

namespace ptc::harness {

// What a field controller is given at a t_s2 tick.
struct ControlContext {
  ann::FieldObservation observation;  // includes the current apertures
  double total_flow = 0.0;            // m^3/s
  double i_eff = 0.0;                 // W/m^2
};

class FieldController {
 public:
  virtual ~FieldController() = default;
  // Returns the apertures to apply until the next call.
  virtual std::vector<double> update(const ControlContext& ctx) = 0;
};

// Equal split: apertures stay as they are.
class NoAllocation final : public FieldController {
 public:
  std::vector<double> update(const ControlContext& ctx) override { return ctx.observation.apertures; }
};

// Auction over the static model of each loop, then valve inversion.
class AuctionController final : public FieldController {
 public:
  AuctionController(std::vector<models::LoopParams> loops, auction::AuctionConfig cfg)
      : loops_(std::move(loops)), cfg_(cfg) {}
  std::vector<double> update(const ControlContext& ctx) override;

 private:
  std::vector<models::LoopParams> loops_;
  auction::AuctionConfig cfg_;
};

class AnnController final : public FieldController {
 public:
  explicit AnnController(std::shared_ptr<const ann::ImitationModel> model) : model_(std::move(model)) {}
  std::vector<double> update(const ControlContext& ctx) override;
  int clamped_features() const { return clamped_; }

 private:
  std::shared_ptr<const ann::ImitationModel> model_;
  int clamped_ = 0;
};

struct ControllerEvent {
  int call = 0;
  double time_s = 0.0;
  const ControlContext* context = nullptr;
  const std::vector<double>* next_apertures = nullptr;
};

struct RunOptions {
  bool keep_trace = true;
  // Called after every controller update; used to record imitation data.
  std::function<void(const ControllerEvent&)> on_control;
  // Used for controller = ann instead of loading scenario.ann_model_path.
  std::shared_ptr<const ann::ImitationModel> model;
};

// Builds the controller named by the scenario.
std::unique_ptr<FieldController> make_controller(const Scenario& s, const RunOptions& options = {});

// Closed-loop day. Every t_s1 tick: total flow from the schedule, valve ->
// flow split, plant advance (with defocus), metrics. Every t_s2 the
// controller updates the apertures from the tick's observation; they apply
// from the next tick. The controller is called floor(duration / t_s2) times
// and the split applied floor(duration / t_s1) times. A plant failure stops
// the run and is reported in the metrics (completed = false).
RunMetrics run_scenario(const Scenario& s, const RunOptions& options = {});

}  // namespace ptc::harness
