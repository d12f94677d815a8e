#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ptc/ann/dataset.hpp"
#include "ptc/harness/metrics.hpp"
#include "ptc/harness/config.hpp"
#include "ptc/harness/profile.hpp"
#include "ptc/harness/scenario.hpp"

namespace ptc::harness {

// Imitation-data campaign: every profile is simulated under the auction with
// several randomly drawn fault sets, and each controller call becomes one
// sample (observation -> next apertures).
struct CampaignConfig {
  std::vector<Profile> profiles;
  int fault_sets = 5;
  FaultRanges ranges;
  // Template for every run; profile, faults and controller are overwritten.
  Scenario base;
  std::uint64_t seed = 1;
};

struct CampaignRun {
  int run_id = 0;
  std::string profile;
  std::vector<double> alpha_kopt, alpha_hl;
  int samples = 0;
  RunMetrics metrics;  // without trace
};

struct CampaignResult {
  ann::Dataset dataset;  // not yet split
  std::vector<CampaignRun> runs;
};

using CampaignProgress = std::function<void(const CampaignRun&)>;

// Throws DivergenceError if a run does not complete.
CampaignResult run_campaign(const CampaignConfig& cfg, const CampaignProgress& progress = {});

// Campaign from a config. The scenario keys give the run template; besides
//   campaign.profiles      number of synthetic days (default 9), or
//   campaign.profile_dir   every *.csv in the directory, by file name
//   campaign.profile_seed  seed of the synthetic days (default: seed)
//   campaign.fault_sets    fault draws per profile (default 5)
// and the faults.* ranges.
CampaignConfig campaign_from_config(const Config& cfg);

// n synthetic days cycling sunny, partly cloudy, cloudy, each drawn from its
// own substream of the seed.
std::vector<Profile> synthetic_profile_set(int n, std::uint64_t seed, const ClearSkyOptions& base = {});

}  // namespace ptc::harness
