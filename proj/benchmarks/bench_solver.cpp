#include <benchmark/benchmark.h>

#include "l2relax/competitors.hpp"
#include "l2relax/covariance.hpp"
#include "l2relax/simulation.hpp"
#include "l2relax/solver.hpp"
#include "l2relax/tuning.hpp"

using namespace l2relax;

namespace {

Matrix dgp_sample_vc(Eigen::Index n) {
    DgpSpec d;
    d.T = 50;
    d.N = n;
    d.K = 2;
    d.seed = 1;
    return sample_vc(forecast_errors(generate_dgp(d).slice_rows(0, d.T))).sigma;
}

void BM_SolveL2Relaxation(benchmark::State& state) {
    const Matrix s = dgp_sample_vc(state.range(0));
    const double tau = 0.25 * simple_average_threshold(s);
    for (auto _ : state) benchmark::DoNotOptimize(solve_l2_relaxation(s, tau).w.data());
}
BENCHMARK(BM_SolveL2Relaxation)->Arg(20)->Arg(50)->Arg(100)->Arg(200);

void BM_WeightPathDefaultGrid(benchmark::State& state) {
    const Matrix s = dgp_sample_vc(state.range(0));
    const TuningGrid g = TuningGrid::default_grid();
    for (auto _ : state) benchmark::DoNotOptimize(weight_path(s, g.span()).size());
}
BENCHMARK(BM_WeightPathDefaultGrid)->Arg(50)->Arg(100);

void BM_Lasso(benchmark::State& state) {
    const Matrix s = dgp_sample_vc(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(lasso_recentered(s, 0.1).w.data());
}
BENCHMARK(BM_Lasso)->Arg(50)->Arg(100);

void BM_Gec(benchmark::State& state) {
    const Matrix s = lw_linear_shrinkage(forecast_errors([&] {
                                             DgpSpec d;
                                             d.N = state.range(0);
                                             d.seed = 2;
                                             return generate_dgp(d).slice_rows(0, d.T);
                                         }()))
                         .sigma;
    for (auto _ : state) benchmark::DoNotOptimize(gec_weights(s, 1.5).w.data());
}
BENCHMARK(BM_Gec)->Arg(50)->Arg(100);

}  // namespace
