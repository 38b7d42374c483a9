#include <benchmark/benchmark.h>

#include "roomnav/belief.hpp"
#include "roomnav/episodes.hpp"
#include "roomnav/eval.hpp"
#include "roomnav/generator.hpp"
#include "roomnav/layout_io.hpp"
#include "roomnav/priors.hpp"

using namespace roomnav;

namespace {

GenParams bench_params(std::uint64_t seed) {
    GenParams p;
    p.rng_seed = seed;
    p.adjacency_rules = default_adjacency_rules();
    return p;
}

const SemanticGrid& bench_house() {
    static const SemanticGrid g = generate_house(bench_params(42));
    return g;
}

const PriorModel& bench_prior() {
    static const PriorModel model = [] {
        std::vector<SemanticGrid> corpus;
        for (std::uint64_t i = 0; i < 12; ++i) {
            corpus.push_back(generate_house(bench_params(combine_seed(7, i))));
        }
        return PriorModel::train(corpus, 1.0);
    }();
    return model;
}

void BM_GenerateHouse(benchmark::State& state) {
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_house(bench_params(seed++)));
    }
}
BENCHMARK(BM_GenerateHouse);

void BM_GeodesicField(benchmark::State& state) {
    const SemanticGrid& g = bench_house();
    Point source{};
    for (int cy = 0; cy < g.height(); ++cy) {
        for (int cx = 0; cx < g.width(); ++cx) {
            if (g.navigable(cx, cy)) {
                source = g.cell_center(cx, cy);
                cy = g.height();
                break;
            }
        }
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(geodesic_field(g, source));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(g.cell_count()));
}
BENCHMARK(BM_GeodesicField);

void BM_Observe(benchmark::State& state) {
    const SemanticGrid& g = bench_house();
    Pose pose;
    for (int cy = 0; cy < g.height(); ++cy) {
        for (int cx = 0; cx < g.width(); ++cx) {
            if (g.navigable(cx, cy)) {
                const Point c = g.cell_center(cx, cy);
                pose = {c.x, c.y, 30.0};
                cy = g.height();
                break;
            }
        }
    }
    const SensorParams sensor;
    for (auto _ : state) {
        benchmark::DoNotOptimize(observe(g, pose, pose, sensor));
    }
}
BENCHMARK(BM_Observe);

void BM_BeliefUpdate(benchmark::State& state) {
    const SemanticGrid& g = bench_house();
    const BeliefEngine engine(bench_prior());
    // a typical mid-episode observation batch
    Observation obs;
    for (int cy = 10; cy < 30; ++cy) {
        for (int cx = 10; cx < 30; ++cx) {
            obs.visible_cells.push_back({cx, cy, g.label(cx, cy), g.full_label(cx, cy)});
        }
    }
    for (auto _ : state) {
        BeliefStack stack = engine.make_stack(g.width(), g.height(), g.resolution());
        stack.update(obs);
        benchmark::DoNotOptimize(stack);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(obs.visible_cells.size()));
}
BENCHMARK(BM_BeliefUpdate);

void BM_TrainCooccurrence(benchmark::State& state) {
    std::vector<SemanticGrid> corpus;
    for (std::uint64_t i = 0; i < 4; ++i) {
        corpus.push_back(generate_house(bench_params(combine_seed(99, i))));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(train_cooccurrence(corpus));
    }
    state.SetItemsProcessed(state.iterations() * 4);
}
BENCHMARK(BM_TrainCooccurrence);

void BM_RunAgentGtPoint(benchmark::State& state) {
    const SemanticGrid& g = bench_house();
    const std::string hash = layout_hash(g);
    Rng rng(3);
    const Episode ep = sample_episode(g, "bench", hash, rng);
    const PriorModel uniform;
    const BeliefEngine engine(uniform);
    const AgentConfig config;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_agent(g, ep, engine, config, Variant::GtPoint));
    }
}
BENCHMARK(BM_RunAgentGtPoint);

void BM_RunAgentOurs(benchmark::State& state) {
    const SemanticGrid& g = bench_house();
    const std::string hash = layout_hash(g);
    Rng rng(3);
    const Episode ep = sample_episode(g, "bench", hash, rng);
    const BeliefEngine engine(bench_prior());
    const AgentConfig config;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_agent(g, ep, engine, config, Variant::Ours));
    }
}
BENCHMARK(BM_RunAgentOurs);

}  // namespace

BENCHMARK_MAIN();
