#include <benchmark/benchmark.h>

#include <chordkit/chordkit.hpp>

#include <cmath>
#include <numbers>
#include <vector>

using namespace chordkit;

namespace {

constexpr double kPi = std::numbers::pi;

TextureImage noise(Rng& rng, int size, int channels, double lo, double hi) {
    std::vector<double> d(static_cast<std::size_t>(size) * size * channels);
    for (double& v : d) {
        v = rng.uniform(lo, hi);
    }
    return TextureImage(size, size, channels, std::move(d));
}

TextureImage wavy_normals(int size) {
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(size) * size * 3);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double p = 0.4 * std::cos(2 * kPi * 3 * x / size);
            const double q = 0.3 * std::sin(2 * kPi * 2 * y / size);
            const Vec3 n = normalize(Vec3{-p, -q, 1.0});
            d.insert(d.end(), {n.x, n.y, n.z});
        }
    }
    return TextureImage(size, size, 3, std::move(d));
}

MaterialSet bench_material(int size) {
    Rng rng(1);
    return MaterialSet::without_height(noise(rng, size, 3, 0.1, 0.9), wavy_normals(size), noise(rng, size, 1, 0.0, 1.0),
                                       noise(rng, size, 1, 0.0, 1.0));
}

const DirectionalLight kLight = DirectionalLight::from_angles(30.0, 50.0, Rgb{kPi});

void BM_Render(benchmark::State& state) {
    const MaterialSet mat = bench_material(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(render(mat, kLight));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_Render)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_GridSearch(benchmark::State& state) {
    const MaterialSet mat = bench_material(static_cast<int>(state.range(0)));
    const TextureImage rgb = render(mat, kLight);
    for (auto _ : state) {
        benchmark::DoNotOptimize(grid_search_rm(rgb, mat.basecolor(), mat.normal(), kLight));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_GridSearch)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_EstimateLight(benchmark::State& state) {
    const MaterialSet mat = bench_material(static_cast<int>(state.range(0)));
    const TextureImage irr = compute_irradiance(render(mat, kLight), mat.basecolor());
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_light(irr, mat.normal()));
    }
}
BENCHMARK(BM_EstimateLight)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Integrate(benchmark::State& state) {
    const TextureImage n = wavy_normals(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_normals(n));
    }
}
BENCHMARK(BM_Integrate)->Arg(256)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_OptimizeIteration(benchmark::State& state) {
    const MaterialSet mat = bench_material(64);
    const TextureImage rgb = render(mat, kLight);
    const MaterialSet init = lambertian_initialization(rgb, kLight);
    OptimConfig cfg;
    cfg.iterations = 10;
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimize_material(rgb, kLight, init, cfg));
    }
}
BENCHMARK(BM_OptimizeIteration)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
