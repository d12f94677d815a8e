// Per-call costs of the controllers and of the plant kernels.

#include <array>
#include <memory>
#include <vector>

#include <benchmark/benchmark.h>
#include <Eigen/Dense>

#include "ptc/ann/imitation.hpp"
#include "ptc/ann/lm.hpp"
#include "ptc/auction.hpp"
#include "ptc/harness/scenario.hpp"
#include "ptc/harness/simulation.hpp"
#include "ptc/models.hpp"

using namespace ptc;

namespace {

std::vector<models::LoopParams> field() {
  std::vector<models::LoopParams> loops(10);
  harness::spread_faults(loops);
  return loops;
}

// Midday observation of a heterogeneous field, all valves open.
harness::ControlContext noon_context(const std::vector<models::LoopParams>& loops) {
  harness::ControlContext c;
  auto& o = c.observation;
  o.t_in = 293.0;
  o.t_a = 30.0;
  o.irradiance_no = 850.0;
  for (std::size_t i = 0; i < loops.size(); ++i) {
    o.t_out.push_back(380.0 + static_cast<double>(i));
    o.intercept.push_back(1.0);
    o.apertures.push_back(1.0);
  }
  c.total_flow = 0.12;
  c.i_eff = 850.0;
  return c;
}

void BM_AuctionAllocate(benchmark::State& state) {
  const auto loops = field();
  auction::AuctionConfig cfg;
  cfg.exact_defocus = state.range(0) != 0;
  const auction::StaticPredictor p(loops, 293.0, 30.0, 850.0, {}, cfg.exact_defocus);
  const std::vector<double> v(10, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(auction::allocate(v, 0.12, cfg, p));
}
BENCHMARK(BM_AuctionAllocate)->Arg(1)->Arg(0)->ArgName("exact");

void BM_AuctionControllerTick(benchmark::State& state) {
  const auto loops = field();
  harness::AuctionController ctrl(loops, auction::AuctionConfig{});
  const auto ctx = noon_context(loops);
  for (auto _ : state) benchmark::DoNotOptimize(ctrl.update(ctx));
}
BENCHMARK(BM_AuctionControllerTick);

void BM_AnnControllerTick(benchmark::State& state) {
  const auto loops = field();
  const auto ctx = noon_context(loops);
  // Cost does not depend on the weights.
  ann::ImitationModel m;
  m.net = ann::Mlp::random({ann::feature_count(10), 50, 25, 10, 10}, 1);
  const Eigen::VectorXd x = ann::make_features(ctx.observation);
  m.inputs = ann::MinMaxScaler(x.array() - 1.0, x.array() + 1.0);
  m.outputs = ann::MinMaxScaler(Eigen::VectorXd::Zero(10), Eigen::VectorXd::Ones(10));
  harness::AnnController ctrl(std::make_shared<const ann::ImitationModel>(std::move(m)));
  for (auto _ : state) benchmark::DoNotOptimize(ctrl.update(ctx));
}
BENCHMARK(BM_AnnControllerTick);

void BM_StaticOutlet(benchmark::State& state) {
  const models::LoopParams p;
  for (auto _ : state) benchmark::DoNotOptimize(models::static_outlet(p, 293.0, 30.0, 850.0, 0.012));
}
BENCHMARK(BM_StaticOutlet);

void BM_DistributedStep(benchmark::State& state) {
  const models::LoopParams p;
  const auto layout = models::SegmentLayout::proportional(p);
  auto s = models::DistributedState::uniform(layout.n_segments, 300.0, 0.008);
  const std::array<double, 4> f{1, 1, 1, 1};
  for (auto _ : state) {
    s = models::distributed_step(p, layout, s, 30.0, 850.0, 0.95, f, 293.0);
    benchmark::DoNotOptimize(s.t_fluid.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(layout.n_segments));
}
BENCHMARK(BM_DistributedStep);

// One LM epoch's normal equations for the 35-50-25-10-10 net.
void BM_NormalEquations(benchmark::State& state) {
  const auto net = ann::Mlp::random({35, 50, 25, 10, 10}, 2);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(state.range(0), 35);
  const Eigen::MatrixXd y = Eigen::MatrixXd::Random(state.range(0), 10);
  for (auto _ : state) benchmark::DoNotOptimize(ann::accumulate_normal_equations(net, x, y, 256));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NormalEquations)->Arg(256)->Iterations(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
