#include <benchmark/benchmark.h>

#include "qss/adversary.hpp"
#include "qss/experiment.hpp"

namespace {

void BM_ApplySingleQubit(benchmark::State& state) {
  auto s = qss::make_carrier(qss::CarrierKind::GHZ, {"a", "b", "c"}).tensor(qss::new_register({"m1", "m2"}));
  const auto h = qss::gates::h_theta(0.7);
  for (auto _ : state) {
    s.apply(h, {"b"});
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_ApplySingleQubit);

void BM_ApplyThreeQubit(benchmark::State& state) {
  auto s = qss::split_input_state(0);
  const auto su = qss::synthesize_split_unitary();
  for (auto _ : state) {
    s.apply(su.matrix, {"b", "m1", "m2"});
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_ApplyThreeQubit);

void BM_SynthesizeSplit(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(qss::synthesize_split_unitary());
}
BENCHMARK(BM_SynthesizeSplit)->Unit(benchmark::kMillisecond);

void BM_Trial(benchmark::State& state) {
  qss::ExperimentSpec spec;
  spec.protocol.variant = qss::Variant::Theta;
  spec.protocol.angles = qss::ThetaTriple::from_pair(0.7, 1.1);
  spec.protocol.num_rounds = 100;
  spec.attack = state.range(0) ? qss::AttackMode::Split : qss::AttackMode::None;
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(qss::run_trial(spec, seed++));
}
BENCHMARK(BM_Trial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
