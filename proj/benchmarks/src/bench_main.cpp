#include <random>

#include <benchmark/benchmark.h>
#include <nlohmann/json.hpp>

#include "aerostt/harness/config.hpp"
#include "aerostt/propagation.hpp"
#include "aerostt/tensor_eigen.hpp"

namespace {

using namespace aerostt;

struct Setup {
  harness::ExperimentConfig cfg = harness::config_from_json(nlohmann::json::object());
  DynamicsParameters p = make_parameters(cfg.models);
  StateVector x0 = harness::initial_state(cfg);
  StateOf<double> x() const {
    StateOf<double> s;
    for (std::size_t i = 0; i < kStateDim; ++i) s[i] = x0[i];
    return s;
  }
};

void BM_EomDouble(benchmark::State& st) {
  const Setup s;
  const auto x = s.x();
  for (auto _ : st) benchmark::DoNotOptimize(eom(x, s.p));
}
BENCHMARK(BM_EomDouble);

void BM_EomJet(benchmark::State& st) {
  const Setup s;
  const auto jets = seed_jets(s.x());
  for (auto _ : st) benchmark::DoNotOptimize(eom_split(jets, s.p).full());
}
BENCHMARK(BM_EomJet);

void BM_VariationalRhs(benchmark::State& st) {
  const Setup s;
  VariationalSystem<double> sys(s.p, static_cast<int>(st.range(0)), DynamicsComponent::Full);
  std::vector<double> y, dy(sys.size());
  sys.initial_conditions(s.x(), y);
  for (auto _ : st) {
    sys(0.0, y, dy);
    benchmark::DoNotOptimize(dy.data());
  }
}
BENCHMARK(BM_VariationalRhs)->Arg(1)->Arg(2)->Arg(3);

void BM_IntegrateStts(benchmark::State& st) {
  const Setup s;
  const std::vector<double> times{0.0, 10.0 * static_cast<double>(st.range(0))};
  for (auto _ : st)
    benchmark::DoNotOptimize(integrate_stts(s.x0, times, 3, s.cfg.models, s.cfg.integrator));
}
BENCHMARK(BM_IntegrateStts)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ComposeStts(benchmark::State& st) {
  const Setup s;
  const std::vector<double> times{0.0, 10.0, 20.0};
  const auto stts = integrate_stts(s.x0, times, 3, s.cfg.models, s.cfg.integrator);
  for (auto _ : st) benchmark::DoNotOptimize(compose_stts(stts[0], stts[1]));
}
BENCHMARK(BM_ComposeStts)->Unit(benchmark::kMicrosecond);

void BM_MaxEigenpair(benchmark::State& st) {
  const std::size_t n = 7;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  Tensor t;
  if (st.range(0) == 3) t.reshape({n, n, n});
  else t.reshape({n, n, n, n});
  for (auto& v : t.storage()) v = nd(rng);
  const auto sym = symmetrize(t);
  EigenSearchConfig cfg;
  cfg.n_starts = 20;
  for (auto _ : st) benchmark::DoNotOptimize(max_eigenpair(sym, cfg));
}
BENCHMARK(BM_MaxEigenpair)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
