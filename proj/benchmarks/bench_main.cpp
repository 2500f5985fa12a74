/*
   Copyright 2026 The levy_bdg Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "levy_bdg/filtration.hpp"
#include "levy_bdg/inequalities.hpp"
#include "levy_bdg/integrator.hpp"
#include "levy_bdg/prm.hpp"

namespace {

using namespace levy_bdg;

MarkMeasure bench_measure(double mass) {
  return MarkMeasure(1, {{{-1.0}, 0.4 * mass}, {{0.5}, 0.4 * mass}, {{2.0}, 0.2 * mass}});
}

void BM_SamplePrm(benchmark::State& state) {
  const MarkMeasure nu = bench_measure(static_cast<double>(state.range(0)));
  std::uint64_t i = 0;
  for (auto _ : state) {
    Stream s = Stream::for_path(1, i++);
    benchmark::DoNotOptimize(sample_prm(nu, 1.0, s));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SamplePrm)->Arg(1)->Arg(16)->Arg(256);

void BM_Integrate(benchmark::State& state) {
  const MarkMeasure nu = bench_measure(16.0);
  const auto xi = StepIntegrand::adapted_threshold(uniform_partition(1.0, static_cast<std::size_t>(state.range(0))),
                                                   1, 2.0, 1.0, 0.5);
  Stream s = Stream::for_path(2, 0);
  const PrmPath path = sample_prm(nu, 1.0, s);
  for (auto _ : state) {
    const CadlagPath I = integrate(xi.realize(path), path, nu);
    benchmark::DoNotOptimize(sup_norm(I, 1.0, 2.0));
  }
}
BENCHMARK(BM_Integrate)->Arg(1)->Arg(16)->Arg(256);

void BM_VerifyII(benchmark::State& state) {
  const ContinuousProblem problem{bench_measure(1.0), StepIntegrand::linear_in_mark({0.0, 1.0}, 1), 1.0};
  const McSettings mc{static_cast<std::size_t>(state.range(0)), 3, 1};
  for (auto _ : state) benchmark::DoNotOptimize(mc_verify_ii(BanachModel{}, problem, 4.0, mc));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_VerifyII)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_DavisDecompose(benchmark::State& state) {
  RandomTreeOptions o;
  o.depth = static_cast<int>(state.range(0));
  o.max_branching = 3;
  o.dim = 2;
  const AdaptedProcess m = random_martingale(o);
  for (auto _ : state) benchmark::DoNotOptimize(davis_decompose(m));
  state.counters["atoms"] = static_cast<double>(m.tree().leaves().size());
}
BENCHMARK(BM_DavisDecompose)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
