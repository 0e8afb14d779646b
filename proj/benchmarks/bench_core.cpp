// Copyright 2026 The qvpsim Authors
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

#include <qvp/emap.hpp>
#include <qvp/fixtures.hpp>

namespace {

using namespace qvp;

void BM_HermitianEig(benchmark::State& state) {
    const Eigen::Index dim = state.range(0);
    SplitMix64 rng(1);
    ComplexMatrix a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            a(i, j) = Complex(rng.normal(), rng.normal());
        }
    }
    ComplexMatrix h = (a + a.adjoint()) / 2.0;
    for (auto _ : state) {
        Eigensystem eig = hermitian_eigendecomposition(h);
        benchmark::DoNotOptimize(eig.values.sum());
    }
}
BENCHMARK(BM_HermitianEig)->Arg(16)->Arg(64)->Arg(128);

void BM_GateApply(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SplitMix64 rng(2);
    ComplexVector psi = random_pure_state(n, rng).amplitudes();
    Gate cx = make_gate("cx", {0, n - 1});
    for (auto _ : state) {
        apply_gate(psi, cx, n);
        benchmark::DoNotOptimize(psi(0));
    }
}
BENCHMARK(BM_GateApply)->Arg(8)->Arg(12)->Arg(14);

void BM_BuildPovm(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) {
        VerificationProcedure q = make_random_procedure(3, m, 2);
        benchmark::DoNotOptimize(q.povm()[1](0, 0));
    }
}
BENCHMARK(BM_BuildPovm)->Arg(2)->Arg(4);

void BM_Pg(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<double> g(n + 1);
    for (int k = 0; k <= n; ++k) {
        g[k] = static_cast<double>(k) / n;
    }
    double p = 0.0;
    for (auto _ : state) {
        p += 1.0 / 4099.0;
        if (p > 1.0) p -= 1.0;
        benchmark::DoNotOptimize(pg(n, g, p));
    }
}
BENCHMARK(BM_Pg)->Arg(256)->Arg(2048)->Arg(4096);

void BM_Synthesize(benchmark::State& state) {
    TargetPointSet targets = TargetPointSet::from({0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0},
                                                  {0.0, 1.0 / 16.0, 15.0 / 16.0, 1.0});
    for (auto _ : state) {
        SynthesizedEMap em = synthesize(targets);
        benchmark::DoNotOptimize(em.lambda_max);
    }
}
BENCHMARK(BM_Synthesize)->Unit(benchmark::kMillisecond);

void BM_IterativeSampled(benchmark::State& state) {
    VerificationProcedure q = make_random_procedure(5, 2, 2, 12);
    IterativePlan plan = IterativePlan::binary(4, {0.0, 0.2, 0.5, 0.8, 1.0});
    DensityMatrix input = DensityMatrix::maximally_mixed(2);
    for (auto _ : state) {
        SampledRun run = run_iterative_sampled(q, plan, input, 1000, 11, 0);
        benchmark::DoNotOptimize(run.distribution.probs(1));
    }
}
BENCHMARK(BM_IterativeSampled)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
