#include <benchmark/benchmark.h>

#include <cmath>
#include <filesystem>

#include "decoupler/dd.hpp"
#include "decoupler/gadd.hpp"
#include "decoupler/io.hpp"
#include "decoupler/qft.hpp"
#include "decoupler/rb_fit.hpp"
#include "decoupler/simulator.hpp"

using namespace decoupler;

namespace {

const DeviceModel& chain10() {
    static const DeviceModel d = load_device(std::filesystem::path(DECOUPLER_DATA_DIR) / "devices" / "chain10.json");
    return d;
}

}  // namespace

// Noiseless branch enumeration of QFT+M on |0..0>.
static void BM_ExactQftM(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto sched = build_schedule(build_qft_m(n), DeviceTiming{});
    for (auto _ : state) benchmark::DoNotOptimize(exact_distribution(sched));
}
BENCHMARK(BM_ExactQftM)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

static void BM_NoisyShotsXpXm(benchmark::State& state) {
    const auto& d = chain10();
    const int n = static_cast<int>(state.range(0));
    const auto sched = build_schedule(build_ghz_qft_circuit({n, 1}), d.timing);
    const auto pulses = dd_pulses(sched, d, DdMode::of(Baseline::XpXmStaggered));
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(run_shots(sched, pulses, d, 1000, ++seed));
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_NoisyShotsXpXm)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_PadUniform(benchmark::State& state) {
    const auto& d = chain10();
    const auto sched = build_schedule(build_qft_m(10), d.timing);
    const auto colors = color_windows(sched, d, 2);
    DdStrategy s;
    s.sequences = {make_sequence({"X_p", "Y_m", "X_m", "Y_p", "X_p", "Y_m", "X_m", "Y_p"}),
                   make_sequence({"Y_p", "X_m", "Y_m", "X_p", "Y_p", "X_m", "Y_m", "X_p"})};
    const auto flags = detect_all_collisions(d);
    for (auto _ : state) benchmark::DoNotOptimize(pad_uniform(sched, colors, s, d, flags));
}
BENCHMARK(BM_PadUniform)->Unit(benchmark::kMicrosecond);

static void BM_FitRbDecay(benchmark::State& state) {
    const std::vector<double> l{0, 1, 2, 3, 4, 5, 10, 15, 20, 35};
    std::vector<double> p;
    for (double x : l) p.push_back(0.48 * std::pow(0.93, x) + 0.5 + 0.002 * std::sin(x));
    for (auto _ : state) benchmark::DoNotOptimize(fit_rb_decay(l, p));
}
BENCHMARK(BM_FitRbDecay);

// One full GA run on a single five-qubit motif.
static void BM_TrainingOneMotif(benchmark::State& state) {
    const auto& d = chain10();
    const auto target = build_schedule(build_qft_m(5), d.timing);
    GaddConfig cfg;
    cfg.n_iterations = static_cast<int>(state.range(0));
    cfg.seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_training(target, cfg, d, 1, {{0, 1, 2, 3, 4}},
                                              [&](const Motif& m) { return qft_training(m, d.n_qubits); }));
    }
}
BENCHMARK(BM_TrainingOneMotif)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
