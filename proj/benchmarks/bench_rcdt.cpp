#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "rcdt/classifier.hpp"
#include "rcdt/features.hpp"
#include "rcdt/illumination.hpp"
#include "rcdt/image.hpp"
#include "rcdt/oracle.hpp"
#include "rcdt/rng.hpp"
#include "rcdt/transport.hpp"

namespace {

rcdt::GrayImage synthetic_image(std::size_t side, std::uint64_t seed) {
    rcdt::CounterRng rng(seed);
    std::vector<double> pixels(side * side);
    for (double& p : pixels) {
        p = rng.uniform(0.0, 255.0);
    }
    return rcdt::GrayImage(side, side, std::move(pixels));
}

void BM_discrete_cdt(benchmark::State& state) {
    rcdt::CounterRng rng(7);
    rcdt::Distribution1D d = rcdt::random_distribution_1d(rng, 1024, -10.0, 10.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rcdt::discrete_cdt(d));
    }
}
BENCHMARK(BM_discrete_cdt);

void BM_discrete_rcdt(benchmark::State& state) {
    rcdt::CounterRng rng(11);
    rcdt::Distribution2D d =
        rcdt::random_distribution_2d(rng, static_cast<std::size_t>(state.range(0)), -10.0, 10.0);
    rcdt::AngleGrid grid(8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rcdt::discrete_rcdt(d, grid));
    }
}
BENCHMARK(BM_discrete_rcdt)->Arg(16)->Arg(64)->Arg(256);

void BM_sliced_wasserstein(benchmark::State& state) {
    rcdt::CounterRng rng(13);
    rcdt::AngleGrid grid(8);
    rcdt::RcdtRepresentation a =
        rcdt::discrete_rcdt(rcdt::random_distribution_2d(rng, 256, -10.0, 10.0), grid);
    rcdt::RcdtRepresentation b =
        rcdt::discrete_rcdt(rcdt::random_distribution_2d(rng, 256, -10.0, 10.0), grid);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rcdt::sliced_wasserstein(a, b));
    }
}
BENCHMARK(BM_sliced_wasserstein);

void BM_extract_features(benchmark::State& state) {
    auto side = static_cast<std::size_t>(state.range(0));
    rcdt::GrayImage img = synthetic_image(side, 17);
    rcdt::PatchGrid grid(side, side, 4, 2);
    rcdt::AngleGrid angles(8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rcdt::extract_features(img, grid, angles));
    }
}
BENCHMARK(BM_extract_features)->Arg(32)->Arg(64);

void BM_classify(benchmark::State& state) {
    const std::size_t side = 32;
    rcdt::PatchGrid grid(side, side, 4, 2);
    rcdt::AngleGrid angles(8);
    std::vector<std::string> labels;
    std::vector<std::vector<rcdt::FeatureSet>> per_class;
    for (std::size_t c = 0; c < 8; ++c) {
        labels.push_back("subject-" + std::to_string(c));
        rcdt::GrayImage img = synthetic_image(side, 100 + c);
        per_class.push_back({rcdt::extract_features(img, grid, angles)});
    }
    rcdt::TrainedModel model = rcdt::train_model(labels, per_class, 0.99);
    rcdt::FeatureSet probe = rcdt::extract_features(synthetic_image(side, 104), grid, angles);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rcdt::classify(probe, model));
    }
}
BENCHMARK(BM_classify);

void BM_apply_global_illumination(benchmark::State& state) {
    rcdt::GrayImage img = synthetic_image(128, 23);
    rcdt::GlobalIlluminationParams params(1.4, 12.0, rcdt::Point2{2.0, 1.0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(rcdt::apply_global_illumination(img, params));
    }
}
BENCHMARK(BM_apply_global_illumination);

}  // namespace

BENCHMARK_MAIN();
