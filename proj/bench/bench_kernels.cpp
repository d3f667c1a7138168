// Serial reference against OpenMP kernel for each parallel hot spot. The
// parallel variants take the thread count as the benchmark argument.

#include "pmots/oracle.hpp"
#include "pmots/pareto.hpp"
#include "pmots/wlp.hpp"
#include "pmots/wsn.hpp"

#include <benchmark/benchmark.h>

using namespace pmots;

namespace {

std::vector<ObjectiveVector> random_points(std::size_t n) {
    auto rng = make_stream(1, 0);
    std::vector<ObjectiveVector> pts(n, ObjectiveVector(3));
    for (auto& p : pts)
        for (auto& v : p) v = uniform01(rng);
    return pts;
}

void BM_RanksSerial(benchmark::State& state) {
    const auto pts = random_points(2000);
    for (auto _ : state) benchmark::DoNotOptimize(pareto_ranks_serial(pts));
}
BENCHMARK(BM_RanksSerial)->Unit(benchmark::kMillisecond);

void BM_RanksParallel(benchmark::State& state) {
    const auto pts = random_points(2000);
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(pareto_ranks(pts, threads));
}
BENCHMARK(BM_RanksParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);

struct Building {
    wlp::Floorplan floor;
    wlp::WlpInstance inst;
};

Building building(int sites_per_side, int powers, int blocks_x, int blocks_y) {
    Building b;
    b.floor.width_m = 40;
    b.floor.height_m = 20;
    b.floor.meters_per_pixel = 0.25;
    for (int i = 1; i < 4; ++i) b.floor.walls.push_back({{10.0 * i, 0}, {10.0 * i, 14}, 5.0});
    b.floor.walls.push_back({{0, 10}, {40, 10}, 3.0});
    for (int i = 0; i < sites_per_side; ++i)
        for (int j = 0; j < sites_per_side; ++j)
            b.inst.sites.push_back({40.0 * (i + 0.5) / sites_per_side,
                                    20.0 * (j + 0.5) / sites_per_side});
    for (int p = 0; p < powers; ++p) b.inst.powers_dbm.push_back(5.0 + 5.0 * p);
    b.inst.directions_deg = {0, 90, 180, 270};
    b.inst.radio.directional = true;
    b.inst.blocks = wlp::make_block_grid(b.floor, blocks_x, blocks_y);
    b.inst.rate_tiers = {{4, 1e6}, {10, 5.5e6}, {18, 11e6}};
    return b;
}

void BM_TensorSerial(benchmark::State& state) {
    const auto b = building(8, 3, 40, 20);
    for (auto _ : state) benchmark::DoNotOptimize(wlp::generate_coverage_tensor_serial(b.inst, b.floor));
}
BENCHMARK(BM_TensorSerial)->Unit(benchmark::kMillisecond);

void BM_TensorParallel(benchmark::State& state) {
    const auto b = building(8, 3, 40, 20);
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(wlp::generate_coverage_tensor(b.inst, b.floor, threads));
}
BENCHMARK(BM_TensorParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);

struct Field {
    wsn::WsnTopology topo;
    wsn::LinkModel link;
    std::vector<double> x;
};

Field field() {
    Field f;
    auto rng = make_stream(2, 0);
    for (int i = 0; i < 10; ++i) {
        f.topo.nodes.push_back({20.0 * uniform01(rng), 20.0 * uniform01(rng), 1e-3, 1.0});
    }
    f.topo.nodes[0].x = 0;
    f.topo.nodes[9].x = 20;
    f.topo.communicating.assign(10, true);
    f.topo.sources = {0};
    f.topo.destinations = {9};
    f.link.packet_bits = 16;
    f.link.gamma = 1.0 / 16;
    f.x = {0, 1, 0.5, 1, 0.25, 1, 0.5, 1, 0.5, 0};
    return f;
}

constexpr std::uint64_t kTrials = 20000;

void BM_MonteCarloSerial(benchmark::State& state) {
    const auto f = field();
    for (auto _ : state)
        benchmark::DoNotOptimize(
            wsn::monte_carlo_oracle_serial(f.topo, f.link, f.x, 0, 9, 4, kTrials, 1));
}
BENCHMARK(BM_MonteCarloSerial)->Unit(benchmark::kMillisecond);

void BM_MonteCarloParallel(benchmark::State& state) {
    const auto f = field();
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            wsn::monte_carlo_oracle(f.topo, f.link, f.x, 0, 9, 4, kTrials, 1, threads));
}
BENCHMARK(BM_MonteCarloParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);

wlp::WlpModel small_model() {
    auto b = building(3, 2, 12, 6);
    b.inst.directions_deg = {0};
    b.inst.max_active = 4;
    auto tensor = wlp::generate_coverage_tensor(b.inst, b.floor);
    return {b.inst, std::move(tensor)};
}

void BM_OracleSerial(benchmark::State& state) {
    const auto model = small_model();
    for (auto _ : state) benchmark::DoNotOptimize(exhaustive_pareto_serial(model));
}
BENCHMARK(BM_OracleSerial)->Unit(benchmark::kMillisecond);

void BM_OracleParallel(benchmark::State& state) {
    const auto model = small_model();
    OracleOptions opts;
    opts.threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(exhaustive_pareto(model, opts));
}
BENCHMARK(BM_OracleParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
