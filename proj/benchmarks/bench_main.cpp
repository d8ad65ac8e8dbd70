#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "passprob/dataset.hpp"
#include "passprob/forest.hpp"
#include "passprob/geometry.hpp"
#include "passprob/metrics.hpp"
#include "passprob/target_engine.hpp"

namespace {

using namespace passprob;

void BM_PointToLine(benchmark::State& state) {
    geom::Point2 a{12.0, 20.0}, b{48.5, 26.3}, p{30.0, 24.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(geom::point_to_line_distance(p, a, b));
        p.x += 1e-9;  // defeat constant folding
    }
}
BENCHMARK(BM_PointToLine);

void BM_EmpiricalProb(benchmark::State& state) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(0.5, 30.0);
    std::vector<double> dist(static_cast<std::size_t>(state.range(0)));
    for (auto& v : dist) v = d(rng);
    for (auto _ : state) benchmark::DoNotOptimize(target::empirical_prob(dist));
}
BENCHMARK(BM_EmpiricalProb)->Arg(5)->Arg(10);

void BM_AucTrapezoid(benchmark::State& state) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        scores[i] = d(rng);
        labels[i] = d(rng) < 0.6;
    }
    for (auto _ : state) benchmark::DoNotOptimize(model::auc_trapezoid(scores, labels));
}
BENCHMARK(BM_AucTrapezoid)->Arg(1000)->Arg(10000);

model::Dataset make_dataset(std::size_t rows) {
    model::Dataset data;
    data.cols = 8;
    data.n_categories = {0, 0, 0, 0, 0, 0, 4, 7};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(0.0, 10.0);
    for (std::size_t r = 0; r < rows; ++r) {
        std::vector<double> row(8);
        for (int c = 0; c < 6; ++c) row[c] = d(rng);
        row[6] = static_cast<int>(d(rng)) % 4;
        row[7] = static_cast<int>(d(rng)) % 7;
        data.add_row(row, (row[0] + row[3] > 10.0) ? 1 : 0, static_cast<std::int64_t>(r / 10));
    }
    return data;
}

void BM_ForestPredict(benchmark::State& state) {
    model::Dataset data = make_dataset(400);
    model::ForestConfig cfg;
    cfg.n_trees = 50;
    cfg.mtry = 5;
    cfg.seed = 1;
    model::Forest forest = model::Forest::train(data, model::all_rows(data), cfg);
    for (auto _ : state)
        benchmark::DoNotOptimize(forest.predict(data, model::all_rows(data)));
}
BENCHMARK(BM_ForestPredict);

}  // namespace

BENCHMARK_MAIN();
