#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "ofdma/channel.hpp"
#include "ofdma/dual.hpp"
#include "ofdma/greedy.hpp"
#include "ofdma/optimal_ts.hpp"
#include "ofdma/rng.hpp"
#include "ofdma/waterfill.hpp"

namespace {

using namespace ofdma;

struct Instance {
    SystemConfig cfg;
    Matrix<double> alpha;
};

Instance reference_instance(double snr_db, double rdc) {
    const auto real = channel::draw_realization(channel::hiperlan2_model_a(), 8, 64, 7);
    const std::vector<double> gap{6.6};
    auto cnr = channel::to_cnr(real, gap, snr_db);
    Instance inst;
    inst.cfg.users = 8;
    inst.cfg.dc_users = 4;
    inst.cfg.subcarriers = 64;
    inst.cfg.total_power = cnr.total_power;
    inst.cfg.dc_rates.assign(4, rdc / 4.0);
    inst.alpha = std::move(cnr.cnr.alpha);
    return inst;
}

void bm_dc_water_level(benchmark::State& state) {
    rng::Stream st(3);
    std::vector<double> cnrs(64);
    for (double& a : cnrs) a = 64.0 * std::norm(st.next_cnormal(1.0));
    for (auto _ : state)
        benchmark::DoNotOptimize(waterfill::dc_water_level(cnrs, 20.0));
}
BENCHMARK(bm_dc_water_level);

void bm_allocate_fixed_assignment(benchmark::State& state) {
    const auto inst = reference_instance(16.0, 80.0);
    std::vector<int> owner(64);
    for (int c = 0; c < 64; ++c) owner[static_cast<std::size_t>(c)] = c % 8;
    const auto rho = SharingMatrix::exclusive(owner, 8);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            waterfill::allocate_given_assignment(inst.cfg, inst.alpha, rho));
}
BENCHMARK(bm_allocate_fixed_assignment);

void bm_optimal_ts(benchmark::State& state) {
    const auto inst = reference_instance(16.0, 80.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(ts::outer_solve(inst.cfg, inst.alpha));
}
BENCHMARK(bm_optimal_ts)->Unit(benchmark::kMillisecond);

void bm_dual(benchmark::State& state) {
    const auto inst = reference_instance(16.0, 80.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(dual::solve_dual(inst.cfg, inst.alpha));
}
BENCHMARK(bm_dual)->Unit(benchmark::kMillisecond);

void bm_greedy(benchmark::State& state) {
    const auto inst = reference_instance(16.0, 80.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(greedy::solve(inst.cfg, inst.alpha));
}
BENCHMARK(bm_greedy);

void bm_channel_draw(benchmark::State& state) {
    const auto model = channel::hiperlan2_model_a();
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(channel::draw_realization(model, 8, 64, ++seed));
}
BENCHMARK(bm_channel_draw);

}  // namespace

BENCHMARK_MAIN();
