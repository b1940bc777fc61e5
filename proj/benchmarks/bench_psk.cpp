#include <benchmark/benchmark.h>

#include "psk/classify.hpp"
#include "psk/lift_cases.hpp"
#include "psk/verify.hpp"

using namespace psk;

namespace {

void BM_KoszulCurvature(benchmark::State& state) {
    KahlerStructure ks = builtin_family(CaseId::VIII, {1.0, 1.0, 1.0});
    for (auto _ : state) {
        FormMatrix<Cd> conn = levi_civita(ks);
        CurvatureTensor R = curvature(conn, ks.alg);
        benchmark::DoNotOptimize(R.real.max_abs());
    }
}
BENCHMARK(BM_KoszulCurvature);

void BM_EtaBracket(benchmark::State& state) {
    Deviance d = cubic_to_eta({Cd(0.3, 1.0), Cd(1.5), Cd(-0.2, 0.7), Cd(0.9)});
    for (auto _ : state) {
        CurvBlocks<Cd> b = eta_bracket_blocks(d);
        benchmark::DoNotOptimize(b.max_abs());
    }
}
BENCHMARK(BM_EtaBracket);

void BM_D2Check(benchmark::State& state) {
    KahlerStructure ks = builtin_family(CaseId::III, {std::sqrt(2.0), 2.0, 1.0});
    FormMatrix<Cd> conn = levi_civita(ks);
    Deviance d = cubic_to_eta({Cd(0), Cd(1.5), Cd(0), Cd(0)});
    for (auto _ : state) {
        D2Result r = d2_check(ks, conn, d);
        benchmark::DoNotOptimize(r.residual);
    }
}
BENCHMARK(BM_D2Check);

void BM_BruteForce100(benchmark::State& state) {
    KahlerStructure ks = builtin_family(CaseId::III, {std::sqrt(2.0), 2.0, 1.0});
    CurvatureTensor R = curvature(levi_civita(ks), ks.alg);
    uint64_t seed = 1;
    for (auto _ : state) {
        BruteForceResult r = brute_force_solutions(R, 100, ++seed);
        benchmark::DoNotOptimize(r.floor);
    }
}
BENCHMARK(BM_BruteForce100);

void BM_Classify(benchmark::State& state) {
    for (auto _ : state) {
        ClassifyReport rep = classify({1.0});
        benchmark::DoNotOptimize(rep.rows.size());
    }
}
BENCHMARK(BM_Classify);

void BM_LiftExactCaseIII(benchmark::State& state) {
    for (auto _ : state) {
        ConicLift<Cq> lift(lift_data_case_iii());
        benchmark::DoNotOptimize(lift.flat_connection_check().exact_zero);
    }
}
BENCHMARK(BM_LiftExactCaseIII);

void BM_LiftDoubleCaseVII(benchmark::State& state) {
    KahlerStructure ks = builtin_family(CaseId::VII, {1.0, 1.0, 1.0});
    LiftData<Cd> data = lift_data(ks, {0.0, 0.0, 0.0, -0.5}, Deviance::zero(2));
    for (auto _ : state) {
        ConicLift<Cd> lift(data);
        benchmark::DoNotOptimize(lift.flat_connection_check().residual);
    }
}
BENCHMARK(BM_LiftDoubleCaseVII);

} // namespace

BENCHMARK_MAIN();
