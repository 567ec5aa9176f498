#include <benchmark/benchmark.h>

#include <random>

#include "facsca/ca.hpp"
#include "facsca/facs.hpp"
#include "facsca/fixtures.hpp"
#include "facsca/skin.hpp"
#include "facsca/twodpca.hpp"

using namespace facsca;

namespace {

ca::Lattice random_lattice(int dim, uint32_t seed) {
    std::mt19937 rng(seed);
    ca::Lattice l(dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) l.set(r, c, static_cast<uint8_t>(rng() % 2));
    return l;
}

void BM_StepEvolve(benchmark::State& state) {
    const auto space = ca::CellularSpace::of_dim(6);
    ca::Lattice lattice = random_lattice(6, 7);
    for (auto _ : state) {
        lattice = ca::step(space, lattice);
        benchmark::DoNotOptimize(lattice);
    }
}
BENCHMARK(BM_StepEvolve);

void BM_EnumerateRules(benchmark::State& state) {
    for (auto _ : state) {
        auto rules = ca::enumerate_rules();
        benchmark::DoNotOptimize(rules);
    }
}
BENCHMARK(BM_EnumerateRules);

void BM_ClassifyAuSet(benchmark::State& state) {
    const std::set<int> aus = {1, 4, 7, 15, 25, 63};
    for (auto _ : state) {
        auto result = facs::classify_au_set(aus);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_ClassifyAuSet);

void BM_RenderPattern(benchmark::State& state) {
    const auto pattern = facs::synthesize_pattern({6, 12, 25});
    for (auto _ : state) {
        auto text = facs::render_pattern(pattern, facs::RenderMode::Canonical);
        benchmark::DoNotOptimize(text);
    }
}
BENCHMARK(BM_RenderPattern);

void BM_PatternDatabase(benchmark::State& state) {
    for (auto _ : state) {
        auto db = facs::pattern_database();
        benchmark::DoNotOptimize(db);
    }
}
BENCHMARK(BM_PatternDatabase);

void BM_SkinMaskCombined(benchmark::State& state) {
    std::mt19937 rng(99);
    vision::Image img = vision::Image::rgb(320, 240);
    for (auto& byte : img.data) byte = static_cast<uint8_t>(rng() % 256);
    const vision::SkinThresholds t;
    for (auto _ : state) {
        auto mask = vision::skin_mask_combined(img, t);
        benchmark::DoNotOptimize(mask);
    }
}
BENCHMARK(BM_SkinMaskCombined);

void BM_Fit2dpca(benchmark::State& state) {
    std::mt19937 rng(5);
    std::vector<vision::Image> chips;
    for (int i = 0; i < 8; ++i) {
        vision::Image chip = vision::Image::gray(16, 16);
        for (auto& byte : chip.data) byte = static_cast<uint8_t>(rng() % 256);
        chips.push_back(chip);
    }
    for (auto _ : state) {
        auto model = features::fit_2dpca(chips, 4);
        benchmark::DoNotOptimize(model);
    }
}
BENCHMARK(BM_Fit2dpca);

void BM_FaceChipSynthesis(benchmark::State& state) {
    for (auto _ : state) {
        auto chip = fixtures::face_chip_with_aus({6, 12}, 64);
        benchmark::DoNotOptimize(chip);
    }
}
BENCHMARK(BM_FaceChipSynthesis);

} // namespace

BENCHMARK_MAIN();
