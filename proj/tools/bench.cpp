// Serial reference against the OpenMP paths for the two hot loops.

#include <benchmark/benchmark.h>

#include "hmorrey/operators.hpp"
#include "hmorrey/parallel.hpp"

using namespace hmorrey;

namespace {

const GroupDescriptor& group() {
    static const GroupDescriptor g = GroupDescriptor::parse("abelian:aniso:nu=1,2");
    return g;
}

void grid_convolution(benchmark::State& state, bool parallel) {
    const int res = static_cast<int>(state.range(0));
    auto f = sample_to_grid(TestFunction::parse("ball:a=1"), group(), 2.0, {res, res});
    auto h = sample_to_grid(TestFunction::parse("gauss"), group(), 2.0, {res, res});
    for (auto _ : state) benchmark::DoNotOptimize(grid_convolve(f, h, parallel));
    state.counters["threads"] = parallel ? thread_count() : 1;
}

void point_evaluation(benchmark::State& state, bool parallel) {
    KernelParams k(group(), 1.0, 2.0);
    auto f = TestFunction::parse("gauss");
    std::vector<Point> pts;
    for (int i = 0; i < state.range(0); ++i) pts.push_back(Point{0.1 * i, 0.05 * i});
    QuadraturePlan plan = QuadraturePlan::parse("spo=1,nodes=3,sphere=6");
    ApplyOptions opts;
    opts.parallel = parallel;
    for (auto _ : state) benchmark::DoNotOptimize(apply_bessel_riesz(f, group(), k, pts, plan, opts));
    state.counters["threads"] = parallel ? thread_count() : 1;
}

}  // namespace

BENCHMARK_CAPTURE(grid_convolution, serial, false)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(grid_convolution, openmp, true)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(point_evaluation, serial, false)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(point_evaluation, openmp, true)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
