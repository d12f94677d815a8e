#include "ptc/harness/metrics.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "ptc/errors.hpp"
#include "ptc/text.hpp"

namespace ptc::harness {

double population_std(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

double weighted_mean(double sunny, double partly_cloudy, double cloudy) {
  return kSunnyWeight * sunny + kPartlyCloudyWeight * partly_cloudy + kCloudyWeight * cloudy;
}

Comparison compare_runs(const RunMetrics& baseline, const RunMetrics& candidate) {
  if (baseline.scenario_hash != candidate.scenario_hash) {
    throw ConfigError("compare_runs: runs come from different scenarios (" + baseline.scenario_hash +
                      " vs " + candidate.scenario_hash + ")");
  }
  Comparison c;
  c.power_delta_mw = candidate.mean_power_mw - baseline.mean_power_mw;
  c.power_delta_pct = baseline.mean_power_mw != 0.0
                          ? 100.0 * c.power_delta_mw / std::abs(baseline.mean_power_mw)
                          : 0.0;
  c.intercept_delta_pct = candidate.mean_intercept_pct - baseline.mean_intercept_pct;
  if (baseline.mean_spread > 0.0) {
    c.spread_ratio = candidate.mean_spread / baseline.mean_spread;
  } else {
    c.spread_ratio = candidate.mean_spread > 0.0 ? INFINITY : 1.0;
  }
  c.controller_time_ratio = baseline.controller_time_mean_s > 0.0
                                ? candidate.controller_time_mean_s / baseline.controller_time_mean_s
                                : 0.0;
  return c;
}

void write_summary(std::ostream& out, const RunMetrics& m) {
  const auto flags = out.flags();
  out << std::fixed;
  out << "scenario: " << m.scenario_name << '\n'
      << "scenario_hash: " << m.scenario_hash << '\n'
      << "seed: " << m.seed << '\n'
      << "plant: " << m.plant << '\n'
      << "controller: " << m.controller << '\n'
      << "completed: " << (m.completed ? "true" : "false") << '\n';
  if (!m.completed) {
    out << "failure_time_s: " << std::setprecision(1) << m.failure_time_s << '\n'
        << "failure: " << m.failure << '\n';
  }
  out << "daylight_threshold_wm2: " << std::setprecision(1) << m.daylight_threshold << '\n'
      << "daylight_ticks: " << m.daylight_ticks << '\n'
      << "mean_power_mw: " << std::setprecision(2) << m.mean_power_mw << '\n'
      << "mean_intercept_pct: " << std::setprecision(2) << m.mean_intercept_pct << '\n'
      << "mean_t_out_spread_c: " << std::setprecision(3) << m.mean_spread << '\n'
      << "max_t_out_c: " << std::setprecision(3) << m.max_t_out << '\n'
      << "max_limit_excess_c: " << std::setprecision(3) << m.max_limit_excess << '\n'
      << "max_flow_mismatch: " << std::scientific << std::setprecision(3) << m.max_flow_mismatch << '\n'
      << std::fixed << "flow_splits: " << m.flow_splits << '\n'
      << "controller_calls: " << m.controller_calls << '\n'
      << "controller_time_mean_s: " << std::scientific << std::setprecision(3)
      << m.controller_time_mean_s << '\n'
      << "controller_time_max_s: " << m.controller_time_max_s << '\n';
  out.flags(flags);
}

void write_comparison(std::ostream& out, const RunMetrics& baseline, const RunMetrics& candidate,
                      const Comparison& c) {
  const auto flags = out.flags();
  out << std::fixed;
  out << "scenario_hash: " << baseline.scenario_hash << '\n'
      << "baseline_controller: " << baseline.controller << '\n'
      << "candidate_controller: " << candidate.controller << '\n'
      << "baseline_power_mw: " << std::setprecision(2) << baseline.mean_power_mw << '\n'
      << "candidate_power_mw: " << candidate.mean_power_mw << '\n'
      << "power_delta_mw: " << std::setprecision(4) << c.power_delta_mw << '\n'
      << "power_delta_pct: " << std::setprecision(3) << c.power_delta_pct << '\n'
      << "baseline_intercept_pct: " << std::setprecision(2) << baseline.mean_intercept_pct << '\n'
      << "candidate_intercept_pct: " << candidate.mean_intercept_pct << '\n'
      << "intercept_delta_pct: " << std::setprecision(3) << c.intercept_delta_pct << '\n'
      << "t_out_spread_ratio: " << std::setprecision(4) << c.spread_ratio << '\n'
      << "controller_time_ratio: " << std::setprecision(4) << c.controller_time_ratio << '\n';
  out.flags(flags);
}

void write_trace_csv(const RunMetrics& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IngestionError("cannot write trace to " + path.string());
  const std::size_t n = m.trace.empty() ? 0 : m.trace.front().t_out.size();
  out << "time_s,dni_wm2,i_eff_wm2,t_ambient_c,total_flow_m3s,total_power_w,t_out_spread_c";
  for (const char* col : {"t_out", "q", "v", "if", "p_th"}) {
    for (std::size_t i = 0; i < n; ++i) out << ',' << col << '_' << i;
  }
  out << '\n';
  const auto f = [](double v) { return text::format_double(v); };
  for (const auto& r : m.trace) {
    out << f(r.time_s) << ',' << f(r.dni) << ',' << f(r.i_eff) << ',' << f(r.t_ambient) << ','
        << f(r.total_flow) << ',' << f(r.total_power) << ',' << f(r.spread);
    for (const auto* col : {&r.t_out, &r.flow, &r.aperture, &r.intercept, &r.power}) {
      for (double v : *col) out << ',' << f(v);
    }
    out << '\n';
  }
  if (!out) throw IngestionError("write failed for " + path.string());
}

}  // namespace ptc::harness
