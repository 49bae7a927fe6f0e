// Copyright 2026 The spinlsv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "spinlsv/dynamics.hpp"
#include "spinlsv/protocols.hpp"

namespace {

using namespace spinlsv;

void BM_SpectralEvolve(benchmark::State& state) {
    const auto basis = enumerate_basis(static_cast<int>(state.range(0)), Sector::full());
    const SpectralCache spectrum(h_smd(basis, 1.0));
    auto psi = fock_state(basis, {0, static_cast<int>(state.range(0)), 0});
    for (auto _ : state) {
        psi = evolve_static(psi, spectrum, 0.1);
        benchmark::DoNotOptimize(psi.amplitudes().data());
    }
}
BENCHMARK(BM_SpectralEvolve)->Arg(10)->Arg(20)->Arg(40);

void BM_RampPropagator(benchmark::State& state) {
    const auto basis = enumerate_basis(static_cast<int>(state.range(0)), Sector::full());
    for (auto _ : state) {
        RampPropagator propagator(basis, -1.0, RampSchedule(0.0, 3.0, 0.5));
        benchmark::DoNotOptimize(propagator.steps());
    }
}
BENCHMARK(BM_RampPropagator)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_SmdScanPoint(benchmark::State& state) {
    const SmdEchoModel model(static_cast<int>(state.range(0)), 1.0, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(precision([&](double k) { return model.final_state(1.3, k); }, 0.05, 1e-6));
    }
}
BENCHMARK(BM_SmdScanPoint)->Arg(10)->Arg(60);

void BM_SmdScan(benchmark::State& state) {
    const auto t_grid = default_t_grid(50);
    const auto kappa_grid = default_kappa_grid(25);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            scan_optimal_precision(SmdEchoProtocol{static_cast<int>(state.range(0)), 1.0, 1.0}, t_grid, kappa_grid)
                .delta_kappa_min);
    }
}
BENCHMARK(BM_SmdScan)->Arg(20)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
