// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include "vsr/dataset.hpp"
#include "vsr/reprojection.hpp"

using namespace vsr;

namespace {

struct Fixture {
    ScalarVolume volume = synth_volume(SynthKind::shells, {128, 128, 128});
    TransferFunction tf = default_transfer_function();
    RayMarchConfig cfg = default_march_config(volume);
    CameraPath path = sample_camera_path(3, volume, 2, CameraPathParams{});
};

const Fixture& fixture() {
    static const Fixture f;
    return f;
}

void render(benchmark::State& state, bool parallel) {
    const auto& f = fixture();
    const int n = static_cast<int>(state.range(0));
    const auto cam = f.path.camera(0, n, n);
    for (auto _ : state) {
        auto frame = parallel ? render_frame(f.volume, f.tf, cam, f.cfg) : render_frame_serial(f.volume, f.tf, cam, f.cfg);
        benchmark::DoNotOptimize(frame.color.values().data());
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}

void reproject(benchmark::State& state, bool parallel) {
    const auto& f = fixture();
    const int n = static_cast<int>(state.range(0));
    const auto prev = f.path.camera(0, n, n);
    const auto curr = f.path.camera(1, n, n);
    const auto packet = render_frame(f.volume, f.tf, curr, f.cfg);
    const HistoryBuffer hist{render_frame(f.volume, f.tf, prev, f.cfg).color, true};
    for (auto _ : state) {
        const auto m = parallel ? compute_motion(packet, prev, curr) : compute_motion_serial(packet, prev, curr);
        auto r = parallel ? taa_pass(packet, hist, m) : taa_pass_serial(packet, hist, m);
        benchmark::DoNotOptimize(r.color.values().data());
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_RenderSerial(benchmark::State& s) { render(s, false); }
void BM_RenderParallel(benchmark::State& s) { render(s, true); }
void BM_ReprojectSerial(benchmark::State& s) { reproject(s, false); }
void BM_ReprojectParallel(benchmark::State& s) { reproject(s, true); }

} // namespace

BENCHMARK(BM_RenderSerial)->Arg(120)->Arg(240)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RenderParallel)->Arg(120)->Arg(240)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ReprojectSerial)->Arg(240)->Arg(960)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ReprojectParallel)->Arg(240)->Arg(960)->Unit(benchmark::kMicrosecond)->UseRealTime();

BENCHMARK_MAIN();
