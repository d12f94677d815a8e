#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ptc::harness {

// One t_s1 tick of a run.
struct TickRecord {
  double time_s = 0.0;
  double dni = 0.0;
  double i_eff = 0.0;   // DNI * n_o
  double t_ambient = 0.0;
  double total_flow = 0.0;  // m^3/s
  std::vector<double> t_out, flow, aperture, intercept, power;  // per loop
  double total_power = 0.0;  // W
  double spread = 0.0;       // population std of t_out, degC
};

struct RunMetrics {
  std::string scenario_name;
  std::string scenario_hash;
  std::string controller;
  std::string plant;
  unsigned long long seed = 0;

  double mean_power_mw = 0.0;         // over daylight ticks
  double mean_intercept_pct = 0.0;    // over daylight ticks, loop mean
  double mean_spread = 0.0;           // time-averaged std of t_out, degC
  double daylight_threshold = 0.0;    // W/m^2
  int daylight_ticks = 0;

  int flow_splits = 0;
  int controller_calls = 0;
  double controller_time_mean_s = 0.0;
  double controller_time_max_s = 0.0;

  double max_t_out = 0.0;         // hottest loop outlet seen
  double max_limit_excess = 0.0;  // worst excess over the defocus limits, degC
  double max_flow_mismatch = 0.0; // max |sum q - Q| / Q over ticks

  bool completed = true;
  double failure_time_s = 0.0;
  std::string failure;

  std::vector<TickRecord> trace;
};

// Population standard deviation.
double population_std(const std::vector<double>& v);

// Weights of the three weather classes in the site climate.
inline constexpr double kSunnyWeight = 0.575;
inline constexpr double kPartlyCloudyWeight = 0.4228;
inline constexpr double kCloudyWeight = 0.0022;

double weighted_mean(double sunny, double partly_cloudy, double cloudy);

struct Comparison {
  double power_delta_mw = 0.0;
  double power_delta_pct = 0.0;
  double intercept_delta_pct = 0.0;  // percentage points
  double spread_ratio = 1.0;         // candidate / baseline
  double controller_time_ratio = 0.0;
};

// Throws ConfigError if the runs come from different scenario inputs.
Comparison compare_runs(const RunMetrics& baseline, const RunMetrics& candidate);

void write_summary(std::ostream& out, const RunMetrics& m);
void write_comparison(std::ostream& out, const RunMetrics& baseline, const RunMetrics& candidate,
                      const Comparison& c);
// One row per tick with every per-loop column.
void write_trace_csv(const RunMetrics& m, const std::filesystem::path& path);

}  // namespace ptc::harness
