#include "ptc/harness/campaign.hpp"

#include <algorithm>
#include <filesystem>

#include "ptc/errors.hpp"
#include "ptc/harness/simulation.hpp"
#include "ptc/random.hpp"

namespace ptc::harness {

CampaignResult run_campaign(const CampaignConfig& cfg, const CampaignProgress& progress) {
  if (cfg.profiles.empty()) throw ConfigError("campaign has no profiles");
  if (cfg.fault_sets < 1) throw ConfigError("campaign needs at least one fault set per profile");
  CampaignResult result;
  std::vector<ann::Sample> samples;
  int run_id = 0;
  for (std::size_t p = 0; p < cfg.profiles.size(); ++p) {
    for (int f = 0; f < cfg.fault_sets; ++f, ++run_id) {
      Scenario s = cfg.base;
      s.name = cfg.profiles[p].name + "/faults-" + std::to_string(f);
      s.profile = cfg.profiles[p];
      s.controller = ControllerKind::auction;
      auto rng = substream(cfg.seed, "campaign/faults/" + std::to_string(run_id));
      sample_faults(s.loops, cfg.ranges, rng);
      double mean_alpha = 0.0;
      for (const auto& l : s.loops) mean_alpha += l.alpha_kopt;
      s.flow.design_alpha = mean_alpha / static_cast<double>(s.loops.size());

      CampaignRun run;
      run.run_id = run_id;
      run.profile = cfg.profiles[p].name;
      for (const auto& l : s.loops) {
        run.alpha_kopt.push_back(l.alpha_kopt);
        run.alpha_hl.push_back(l.alpha_hl);
      }
      RunOptions opt;
      opt.keep_trace = false;
      opt.on_control = [&](const ControllerEvent& ev) {
        ann::Sample smp;
        smp.run_id = run_id;
        smp.tick = ev.call;
        smp.x = ann::make_features(ev.context->observation);
        smp.y = Eigen::Map<const Eigen::VectorXd>(ev.next_apertures->data(),
                                                  static_cast<Eigen::Index>(ev.next_apertures->size()));
        samples.push_back(std::move(smp));
        ++run.samples;
      };
      run.metrics = run_scenario(s, opt);
      if (!run.metrics.completed) {
        throw DivergenceError("campaign run " + s.name + " failed at t = " +
                              std::to_string(run.metrics.failure_time_s) + " s: " + run.metrics.failure);
      }
      if (progress) progress(run);
      result.runs.push_back(std::move(run));
    }
  }
  result.dataset = ann::make_dataset(samples);
  return result;
}

CampaignConfig campaign_from_config(const Config& cfg) {
  CampaignConfig c;
  c.base = scenario_from_config(cfg);
  c.seed = c.base.seed;
  c.ranges = fault_ranges_from_config(cfg);
  c.fault_sets = static_cast<int>(cfg.get_int("campaign.fault_sets", c.fault_sets));
  if (c.fault_sets < 1) throw ConfigError("campaign.fault_sets must be at least 1");
  if (cfg.has("campaign.profile_dir")) {
    const auto dir = cfg.get_path("campaign.profile_dir");
    if (!std::filesystem::is_directory(dir)) throw ConfigError("campaign.profile_dir is not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ConfigError("no .csv profiles in " + dir.string());
    for (const auto& f : files) c.profiles.push_back(load_profile(f));
  } else {
    const long long n = cfg.get_int("campaign.profiles", 9);
    if (n < 1) throw ConfigError("campaign.profiles must be at least 1");
    const auto seed = static_cast<std::uint64_t>(cfg.get_int("campaign.profile_seed", static_cast<long long>(c.seed)));
    c.profiles = synthetic_profile_set(static_cast<int>(n), seed);
  }
  return c;
}

std::vector<Profile> synthetic_profile_set(int n, std::uint64_t seed, const ClearSkyOptions& base) {
  static constexpr WeatherClass kCycle[] = {WeatherClass::sunny, WeatherClass::partly_cloudy,
                                            WeatherClass::cloudy};
  std::vector<Profile> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(synthetic_day(kCycle[i % 3], substream_seed(seed, "profile/" + std::to_string(i)), base));
  }
  return out;
}

}  // namespace ptc::harness
