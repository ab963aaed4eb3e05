#include <levyscale/dividends.hpp>
#include <levyscale/model.hpp>
#include <levyscale/roots.hpp>
#include <levyscale/scale.hpp>
#include <levyscale/wiener_hopf.hpp>

#include <benchmark/benchmark.h>

namespace {

using namespace levyscale;

SpectralModel table1_model(double sigma) {
    Hyperexponential j;
    j.lambda = 1.0;
    j.weights = {0.000018, 0.068340, 0.476233, 0.332195, 0.093283, 0.029931};
    j.rates = {0.097, 0.248, 0.761, 4.274, 38.709, 676.178};
    return make_model(sigma, 0.1, std::move(j));
}

SpectralModel beta_model() {
    return make_model(0.2, 0.1, BetaFamily{0.1, 3.0, 1.0, 1.5});
}

void BM_SolveRootsFinite(benchmark::State& state) {
    const auto m = table1_model(0.2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_roots(m, 0.03));
    }
}
BENCHMARK(BM_SolveRootsFinite);

void BM_BuildScaleFinite(benchmark::State& state) {
    const auto m = table1_model(0.2);
    const auto rs = solve_roots(m, 0.03);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_scale_finite(m, rs, compute_coefficients(m, rs)));
    }
}
BENCHMARK(BM_BuildScaleFinite);

void BM_EvalGrid(benchmark::State& state) {
    const auto m = table1_model(0.2);
    const auto rs = solve_roots(m, 0.03);
    const auto b = build_scale_finite(m, rs, compute_coefficients(m, rs));
    const long n = state.range(0);
    for (auto _ : state) {
        double acc = 0.0;
        for (long i = 0; i <= n; ++i) {
            const double x = 3.0 * static_cast<double>(i) / static_cast<double>(n);
            acc += eval(b, Curve::W, x) + eval(b, Curve::Z, x);
        }
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * (n + 1));
}
BENCHMARK(BM_EvalGrid)->Arg(100)->Arg(1000);

void BM_SolveRootsMeromorphic(benchmark::State& state) {
    const auto m = beta_model();
    const auto count = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_roots(m, 0.03, count));
    }
}
BENCHMARK(BM_SolveRootsMeromorphic)->Arg(15)->Arg(150);

void BM_BuildBoundsMeromorphic(benchmark::State& state) {
    const auto m = beta_model();
    const auto count = static_cast<std::size_t>(state.range(0));
    const auto rs = solve_roots(m, 0.03, count);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_scale_meromorphic(m, rs, compute_coefficients(m, rs)));
    }
}
BENCHMARK(BM_BuildBoundsMeromorphic)->Arg(15)->Arg(150);

void BM_ClassicBarrier(benchmark::State& state) {
    const auto m = table1_model(0.2);
    const auto rs = solve_roots(m, 0.03);
    const auto b = build_scale_finite(m, rs, compute_coefficients(m, rs));
    for (auto _ : state) {
        benchmark::DoNotOptimize(classic_barrier(b));
    }
}
BENCHMARK(BM_ClassicBarrier);

void BM_ImpulsePolicy(benchmark::State& state) {
    const auto m = table1_model(0.2);
    const auto rs = solve_roots(m, 0.03);
    const auto b = build_scale_finite(m, rs, compute_coefficients(m, rs));
    for (auto _ : state) {
        benchmark::DoNotOptimize(impulse_policy(b, 0.5));
    }
}
BENCHMARK(BM_ImpulsePolicy);

} // namespace

BENCHMARK_MAIN();
