#include <benchmark/benchmark.h>

#include "l2relax/covariance.hpp"
#include "l2relax/numerics.hpp"

using namespace l2relax;

namespace {

Matrix errors(Eigen::Index t, Eigen::Index n) {
    RngStream rng(3, 0);
    return standard_normal(rng, t, n);
}

void BM_SampleVc(benchmark::State& state) {
    const Matrix x = errors(state.range(0), state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(sample_vc(x).sigma.data());
}
BENCHMARK(BM_SampleVc)->Args({50, 100})->Args({240, 100})->Args({1000, 200});

void BM_LedoitWolf(benchmark::State& state) {
    const Matrix x = errors(state.range(0), state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(lw_linear_shrinkage(x).sigma.data());
}
BENCHMARK(BM_LedoitWolf)->Args({50, 100})->Args({240, 100})->Args({1000, 200});

void BM_SymEigen(benchmark::State& state) {
    const Matrix x = errors(2 * state.range(0), state.range(0));
    const Matrix s = sample_vc(x).sigma;
    for (auto _ : state) benchmark::DoNotOptimize(sym_eigen(s).values.data());
}
BENCHMARK(BM_SymEigen)->Arg(50)->Arg(100)->Arg(200);

}  // namespace
