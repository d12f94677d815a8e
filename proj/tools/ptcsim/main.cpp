// ptcsim: command line driver for scenarios, imitation campaigns and ANN
// training. Every command reads a config file and writes into --out.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptc/ann/dataset.hpp"
#include "ptc/ann/imitation.hpp"
#include "ptc/ann/model_io.hpp"
#include "ptc/errors.hpp"
#include "ptc/harness/campaign.hpp"
#include "ptc/harness/config.hpp"
#include "ptc/harness/exit_codes.hpp"
#include "ptc/harness/metrics.hpp"
#include "ptc/harness/scenario.hpp"
#include "ptc/harness/simulation.hpp"

namespace fs = std::filesystem;
using namespace ptc;
using namespace ptc::harness;

namespace {

using Clock = std::chrono::steady_clock;

struct Common {
  std::string config;
  std::string out;
};

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path.string());
  f.precision(10);
  return f;
}

void write_run(const RunMetrics& m, const fs::path& dir, const std::string& stem) {
  auto s = open_out(dir / (stem + ".txt"));
  write_summary(s, m);
  write_trace_csv(m, dir / (stem + "_trace.csv"));
}

// A run that stopped early still has its partial outputs written.
int run_status(const RunMetrics& m) {
  if (m.completed) return kExitOk;
  std::fprintf(stderr, "%s: run stopped at t = %.0f s: %s\n", m.controller.c_str(), m.failure_time_s,
               m.failure.c_str());
  return kExitDivergence;
}

Scenario with_controller(Scenario s, ControllerKind k) {
  s.controller = k;
  return s;
}

int cmd_simulate(const Common& c) {
  const Scenario s = scenario_from_config(Config::load(c.config));
  const RunMetrics m = run_scenario(s);
  write_run(m, c.out, "summary");
  write_summary(std::cout, m);
  return run_status(m);
}

int cmd_compare(const Common& c, const std::string& baseline, const std::string& candidate) {
  const Scenario s = scenario_from_config(Config::load(c.config));
  const RunMetrics a = run_scenario(with_controller(s, controller_from_string(baseline)));
  const RunMetrics b = run_scenario(with_controller(s, controller_from_string(candidate)));
  write_run(a, c.out, "baseline");
  write_run(b, c.out, "candidate");
  const Comparison cmp = compare_runs(a, b);
  auto f = open_out(fs::path(c.out) / "comparison.txt");
  write_comparison(f, a, b, cmp);
  write_comparison(std::cout, a, b, cmp);
  const int sa = run_status(a);
  return sa != kExitOk ? sa : run_status(b);
}

int cmd_gen_dataset(const Common& c) {
  const CampaignConfig cfg = campaign_from_config(Config::load(c.config));
  std::printf("campaign: %zu profiles x %d fault sets, seed %llu\n", cfg.profiles.size(), cfg.fault_sets,
              static_cast<unsigned long long>(cfg.seed));
  const auto t0 = Clock::now();
  const CampaignResult r = run_campaign(cfg, [](const CampaignRun& run) {
    std::printf("  run %3d %-28s %5d samples  %.2f MW\n", run.run_id, run.profile.c_str(), run.samples,
                run.metrics.mean_power_mw);
    std::fflush(stdout);
  });
  ann::save_dataset_csv(r.dataset, fs::path(c.out) / "dataset.csv");
  auto runs = open_out(fs::path(c.out) / "runs.csv");
  runs << "run_id,profile,samples,mean_power_mw,mean_intercept_pct";
  for (std::size_t i = 0; i < cfg.base.loops.size(); ++i) runs << ",alpha_kopt_" << i;
  for (std::size_t i = 0; i < cfg.base.loops.size(); ++i) runs << ",alpha_hl_" << i;
  runs << '\n';
  for (const auto& run : r.runs) {
    runs << run.run_id << ',' << run.profile << ',' << run.samples << ',' << run.metrics.mean_power_mw << ','
         << run.metrics.mean_intercept_pct;
    for (double a : run.alpha_kopt) runs << ',' << a;
    for (double a : run.alpha_hl) runs << ',' << a;
    runs << '\n';
  }
  std::printf("samples: %zu in %.1f s\n", r.dataset.size(),
              std::chrono::duration<double>(Clock::now() - t0).count());
  return kExitOk;
}

struct TrainSettings {
  fs::path dataset;
  std::uint64_t split_seed = 42;
  ann::ImitationConfig imitation;
};

// train.dataset, train.hidden, train.seed, train.split_seed, train.max_epochs,
// train.max_val_checks, train.mu0, train.min_gradient, train.chunk_samples
TrainSettings train_settings(const Config& cfg) {
  TrainSettings t;
  t.dataset = cfg.get_path("train.dataset");
  t.split_seed = static_cast<std::uint64_t>(cfg.get_int("train.split_seed", 42));
  auto& im = t.imitation;
  if (const auto h = cfg.find_doubles("train.hidden")) {
    im.hidden.clear();
    for (double w : *h) {
      if (w < 1.0 || w != static_cast<int>(w)) throw ConfigError("train.hidden must list positive integers");
      im.hidden.push_back(static_cast<int>(w));
    }
  }
  im.seed = static_cast<std::uint64_t>(cfg.get_int("train.seed", 0));
  im.lm.max_epochs = static_cast<int>(cfg.get_int("train.max_epochs", im.lm.max_epochs));
  im.lm.max_val_checks = static_cast<int>(cfg.get_int("train.max_val_checks", im.lm.max_val_checks));
  im.lm.mu0 = cfg.get_double("train.mu0", im.lm.mu0);
  im.lm.min_gradient = cfg.get_double("train.min_gradient", im.lm.min_gradient);
  im.lm.chunk_samples = static_cast<std::size_t>(cfg.get_int("train.chunk_samples", 256));
  try {
    im.lm.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("train: ") + e.what());
  }
  return t;
}

void write_fit(std::ostream& out, const char* split, const ann::FitQuality& q) {
  out << split << "_mse: " << q.mse << '\n' << split << "_r: " << q.r_pooled << '\n';
}

int cmd_train(const Common& c) {
  const TrainSettings t = train_settings(Config::load(c.config));
  ann::Dataset d = ann::load_dataset_csv(t.dataset);
  ann::split_dataset(d, t.split_seed);
  std::printf("dataset: %zu samples (%zu / %zu / %zu)\n", d.size(), d.train.size(), d.validation.size(),
              d.test.size());
  auto history = open_out(fs::path(c.out) / "history.csv");
  history << "epoch,train_sse,val_sse,mu,gradient_norm\n";
  const auto t0 = Clock::now();
  ann::TrainingReport rep;
  const auto model = ann::train_imitation(d, t.imitation, &rep, [&](const ann::LmEpoch& e) {
    history << e.epoch << ',' << e.train_sse << ',' << e.val_sse << ',' << e.mu << ',' << e.gradient_norm << '\n';
    history.flush();
    std::printf("  epoch %4d  train %.4e  val %.4e  mu %.1e\n", e.epoch, e.train_sse, e.val_sse, e.mu);
    std::fflush(stdout);
  });
  const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  ann::save_model(model, fs::path(c.out) / "model.txt");
  auto report = open_out(fs::path(c.out) / "report.txt");
  for (std::ostream* o : {static_cast<std::ostream*>(&report), static_cast<std::ostream*>(&std::cout)}) {
    *o << "dataset: " << t.dataset.string() << '\n'
       << "split_seed: " << t.split_seed << '\n'
       << "init_seed: " << t.imitation.seed << '\n'
       << "stop: " << ann::to_string(rep.history.stop) << '\n'
       << "best_epoch: " << rep.history.best_epoch << '\n'
       << "seconds: " << seconds << '\n';
    write_fit(*o, "train", rep.train);
    write_fit(*o, "validation", rep.validation);
    write_fit(*o, "test", rep.test);
  }
  return kExitOk;
}

int cmd_eval_ann(const Common& c) {
  const Scenario s = scenario_from_config(Config::load(c.config));
  if (s.ann_model_path.empty()) throw ConfigError("eval-ann needs controller.model");
  RunOptions o;
  o.model = std::make_shared<const ann::ImitationModel>(ann::load_model(s.ann_model_path));
  const RunMetrics none = run_scenario(with_controller(s, ControllerKind::none), o);
  const RunMetrics net = run_scenario(with_controller(s, ControllerKind::ann), o);
  write_run(none, c.out, "none");
  write_run(net, c.out, "ann");
  auto f = open_out(fs::path(c.out) / "comparison.txt");
  f << "# ann vs none\n";
  write_comparison(f, none, net, compare_runs(none, net));
  write_comparison(std::cout, none, net, compare_runs(none, net));
  int status = run_status(none);
  if (status == kExitOk) status = run_status(net);
  // The auction needs the static model of each loop as its predictor, which
  // only the static and lumped plants share.
  if (s.plant != PlantKind::distributed) {
    const RunMetrics auc = run_scenario(with_controller(s, ControllerKind::auction), o);
    write_run(auc, c.out, "auction");
    f << "# ann vs auction\n";
    write_comparison(f, auc, net, compare_runs(auc, net));
    std::cout << "# ann vs auction\n";
    write_comparison(std::cout, auc, net, compare_runs(auc, net));
    if (status == kExitOk) status = run_status(auc);
  }
  return status;
}

int cmd_bench(const Common& c, double min_seconds) {
  const Scenario s = scenario_from_config(Config::load(c.config));
  if (s.plant == PlantKind::distributed) throw ConfigError("bench runs the auction, so the plant must be static or lumped");
  std::vector<ControlContext> contexts;
  RunOptions o;
  o.keep_trace = false;
  o.on_control = [&](const ControllerEvent& e) { contexts.push_back(*e.context); };
  run_scenario(with_controller(s, ControllerKind::auction), o);
  if (contexts.empty()) throw ConfigError("scenario produced no controller calls");

  const auto per_call = [&](FieldController& ctrl) {
    long calls = 0;
    const auto t0 = Clock::now();
    double elapsed = 0.0;
    do {
      for (const auto& ctx : contexts) ctrl.update(ctx);
      calls += static_cast<long>(contexts.size());
      elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    } while (elapsed < min_seconds);
    return elapsed / static_cast<double>(calls);
  };
  AuctionController auction(s.loops, s.auction);
  const double t_auction = per_call(auction);
  auto f = open_out(fs::path(c.out) / "bench.txt");
  for (std::ostream* out : {static_cast<std::ostream*>(&f), static_cast<std::ostream*>(&std::cout)}) {
    *out << "scenario_hash: " << s.hash() << '\n'
         << "ticks: " << contexts.size() << '\n'
         << "auction_s_per_call: " << t_auction << '\n';
  }
  if (!s.ann_model_path.empty()) {
    AnnController net(std::make_shared<const ann::ImitationModel>(ann::load_model(s.ann_model_path)));
    const double t_ann = per_call(net);
    for (std::ostream* out : {static_cast<std::ostream*>(&f), static_cast<std::ostream*>(&std::cout)}) {
      *out << "ann_s_per_call: " << t_ann << '\n' << "speedup: " << t_auction / t_ann << '\n';
    }
  }
  return kExitOk;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config, "Config file")->required()->check(CLI::ExistingFile);
  cmd->add_option("-o,--out", c.out, "Output directory")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solar field flow allocation simulator"};
  app.require_subcommand(1);
  Common common;
  std::string baseline = "none", candidate = "auction";
  double bench_seconds = 1.0;

  auto* simulate = app.add_subcommand("simulate", "Run one scenario");
  auto* compare = app.add_subcommand("compare", "Run a scenario under two controllers and compare");
  auto* gen = app.add_subcommand("gen-dataset", "Run an imitation campaign and write its dataset");
  auto* train = app.add_subcommand("train", "Train the allocator network on a dataset");
  auto* eval = app.add_subcommand("eval-ann", "Closed-loop evaluation of a trained network");
  auto* bench = app.add_subcommand("bench", "Per-call controller timing");
  for (auto* cmd : {simulate, compare, gen, train, eval, bench}) add_common(cmd, common);
  compare->add_option("--baseline", baseline, "Baseline controller")->check(CLI::IsMember({"none", "auction", "ann"}));
  compare->add_option("--candidate", candidate, "Candidate controller")->check(CLI::IsMember({"none", "auction", "ann"}));
  bench->add_option("--min-seconds", bench_seconds, "Minimum timing window per controller")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    fs::create_directories(common.out);
    if (*simulate) return cmd_simulate(common);
    if (*compare) return cmd_compare(common, baseline, candidate);
    if (*gen) return cmd_gen_dataset(common);
    if (*train) return cmd_train(common);
    if (*eval) return cmd_eval_ann(common);
    if (*bench) return cmd_bench(common, bench_seconds);
  } catch (const IngestionError& e) {
    if (e.line() > 0) {
      std::fprintf(stderr, "ptcsim: %s (line %ld)\n", e.what(), e.line());
    } else {
      std::fprintf(stderr, "ptcsim: %s\n", e.what());
    }
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ptcsim: %s\n", e.what());
    return exit_code_for(e);
  }
  return kExitUnexpected;
}
