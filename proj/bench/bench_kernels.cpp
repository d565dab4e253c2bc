// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <random>

#include "jumpset/classify.hpp"
#include "jumpset/decompose.hpp"
#include "jumpset/oscillation.hpp"
#include "jumpset/parallel.hpp"
#include "jumpset/synth.hpp"

namespace {

using namespace jumpset;

const GridFunction& disk_grid() {
    static const GridFunction u = [] {
        CorpusSpec spec;
        spec.kind = "disk";
        spec.resolution = 64;
        return generate(spec).u;
    }();
    return u;
}

const ESet& disk_eset() {
    static const ESet set = [] {
        CorpusSpec spec;
        spec.kind = "disk";
        spec.resolution = 128;
        const GridFunction u = generate(spec).u;
        const ESetParams p = make_eset_params(0.2, 0.5, Ball{{0.0, 0.5, 0.0}, 0.25}, 0.125, u.spacing());
        return extract_e_set_serial(u, p, make_lattice(2));
    }();
    return set;
}

std::vector<Vec> random_points(std::size_t n) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<Vec> points(n);
    for (Vec& p : points) p = {unit(rng), unit(rng), 0.0};
    return points;
}

void BM_osc_full_ball(benchmark::State& state) {
    const LatticePtr lattice = make_lattice(2, static_cast<int>(state.range(0)));
    const BlowupSample s = blowup_sample(disk_grid(), Vec{0.3, 0.0, 0.0}, 0.1, lattice);
    for (auto _ : state) benchmark::DoNotOptimize(osc(s.values));
}
BENCHMARK(BM_osc_full_ball)->Arg(33)->Arg(65);

void BM_classify_grid_serial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(classify_grid_serial(disk_grid(), ClassifyConfig{}));
}
BENCHMARK(BM_classify_grid_serial)->Unit(benchmark::kMillisecond);

void BM_classify_grid_parallel(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(classify_grid(disk_grid(), ClassifyConfig{}, default_workers()));
}
BENCHMARK(BM_classify_grid_parallel)->Unit(benchmark::kMillisecond);

void BM_extract_serial(benchmark::State& state) {
    const ESetParams p = make_eset_params(0.2, 0.5, Ball{{0.0, 0.5, 0.0}, 0.25}, 0.125, disk_grid().spacing());
    const LatticePtr lattice = make_lattice(2);
    for (auto _ : state) benchmark::DoNotOptimize(extract_e_set_serial(disk_grid(), p, lattice));
}
BENCHMARK(BM_extract_serial)->Unit(benchmark::kMillisecond);

void BM_extract_parallel(benchmark::State& state) {
    const ESetParams p = make_eset_params(0.2, 0.5, Ball{{0.0, 0.5, 0.0}, 0.25}, 0.125, disk_grid().spacing());
    const LatticePtr lattice = make_lattice(2);
    for (auto _ : state) benchmark::DoNotOptimize(extract_e_set(disk_grid(), p, lattice, default_workers()));
}
BENCHMARK(BM_extract_parallel)->Unit(benchmark::kMillisecond);

void BM_cone_scan_serial(benchmark::State& state) {
    const std::vector<Vec> points = random_points(static_cast<std::size_t>(state.range(0)));
    const ConeSpec cone = cone_from_params(Ball{{0.0, 0.5, 0.0}, 0.25}, 0.5, 0.25, 2);
    for (auto _ : state) benchmark::DoNotOptimize(verify_cone_property_serial(points, cone, 0.0));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_cone_scan_serial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_cone_scan_parallel(benchmark::State& state) {
    const std::vector<Vec> points = random_points(static_cast<std::size_t>(state.range(0)));
    const ConeSpec cone = cone_from_params(Ball{{0.0, 0.5, 0.0}, 0.25}, 0.5, 0.25, 2);
    for (auto _ : state) benchmark::DoNotOptimize(verify_cone_property(points, cone, 0.0, default_workers()));
}
BENCHMARK(BM_cone_scan_parallel)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_cover(benchmark::State& state) {
    const ESet& set = disk_eset();
    const ConeSpec cone = cone_from_params(set.params.ball, 0.5, 0.125, 2);
    for (auto _ : state) benchmark::DoNotOptimize(cover_with_graphs(set.points, cone));
}
BENCHMARK(BM_cover)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
