#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "ptc/defocus.hpp"
#include "ptc/harness/scenario.hpp"
#include "ptc/models.hpp"

namespace ptc::harness {

struct Conditions {
  double t_in = 0.0;
  double t_a = 0.0;
  double dni = 0.0;
  double n_o = 1.0;
  double i_eff() const { return dni * n_o; }
};

// A field of loops driven one control tick at a time. Each loop carries its
// own defocus protection.
class Plant {
 public:
  virtual ~Plant() = default;
  std::size_t n_loops() const { return loops_.size(); }

  // Advances the field by dt with the given per-loop flows (m^3/s).
  virtual void advance(std::span<const double> flows, const Conditions& c, double dt) = 0;

  const std::vector<double>& t_out() const { return t_out_; }
  // Per-loop intercept factor as reported to the field controller.
  const std::vector<double>& intercept() const { return intercept_; }
  // Worst excess over the defocus limits during the last advance, degC.
  double last_excess() const { return last_excess_; }

 protected:
  Plant(std::vector<models::LoopParams> loops, defocus::DefocusLimits limits, double t_init);

  std::vector<models::LoopParams> loops_;
  defocus::DefocusLimits limits_;
  std::vector<double> t_out_;
  std::vector<double> intercept_;
  double last_excess_ = 0.0;
};

// Steady state each tick.
class StaticPlant final : public Plant {
 public:
  StaticPlant(std::vector<models::LoopParams> loops, defocus::DefocusLimits limits, double t_init);
  void advance(std::span<const double> flows, const Conditions& c, double dt) override;
};

// Lumped ODE, explicit Euler with substeps of at most max_substep.
class LumpedPlant final : public Plant {
 public:
  LumpedPlant(std::vector<models::LoopParams> loops, defocus::DefocusLimits limits, double t_init,
              double max_substep = 1.0);
  void advance(std::span<const double> flows, const Conditions& c, double dt) override;

 private:
  double max_substep_;
};

// Distributed metal/fluid model at base_dt (0.25 s) with further substeps
// whenever the Courant or exchange number would exceed its bound.
// Defocusing acts per collector on the raw IF; the controller sees the loop
// mean of the 10-minute filtered IF.
class DistributedPlant final : public Plant {
 public:
  DistributedPlant(std::vector<models::LoopParams> loops, defocus::DefocusLimits limits, double t_init,
                   double base_dt = 0.25);
  void advance(std::span<const double> flows, const Conditions& c, double dt) override;

  const models::SegmentLayout& layout() const { return layout_; }
  const models::DistributedState& state(std::size_t loop) const { return states_[loop]; }
  const std::array<double, 4>& raw_intercept(std::size_t loop) const { return raw_if_[loop]; }

 private:
  models::SegmentLayout layout_;
  double base_dt_;
  std::vector<models::DistributedState> states_;
  std::vector<std::array<double, 4>> raw_if_;
  std::vector<std::array<double, 4>> filtered_if_;
};

std::unique_ptr<Plant> make_plant(const Scenario& s);

}  // namespace ptc::harness
