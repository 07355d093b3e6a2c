// Times the parallel kernels against the serial reference implementations.
#include <chrono>
#include <cstdio>
#include <functional>

#include "pinchlab/green.hpp"
#include "pinchlab/hessian.hpp"
#include "pinchlab/manifold.hpp"
#include "pinchlab/monotone.hpp"
#include "pinchlab/parallel.hpp"

using namespace pinchlab;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    fn(); // warm up
    const auto t0 = std::chrono::steady_clock::now();
    for (int k = 0; k < reps; ++k) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void row(const char* name, const std::function<void()>& fn, int reps) {
    use_serial_kernels() = true;
    const double ts = time_ms(fn, reps);
    use_serial_kernels() = false;
    const double tp = time_ms(fn, reps);
    std::printf("%-18s %10.2f ms %10.2f ms %8.2fx\n", name, ts, tp, ts / tp);
}

} // namespace

int main() {
    ManifoldSpec spec = load_spec(Config::parse_string(
        "[manifold]\nn = 3\nkind = warped\nwarp.id = smoothed-cone\n"
        "warp.a = 0.8\nwarp.width = 0.5\nlabel = bench\n"));
    const Grid2D grid = Grid2D::make(1e-3, 64.0, 512, 256);
    const BField field = offcenter_green(spec, 1.0, 24, grid);
    std::vector<double> levels;
    for (double s = 0.5; s <= 16.0; s *= 1.2) levels.push_back(s);

    std::printf("%-18s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");
    row("offcenter_green", [&] { offcenter_green(spec, 1.0, 24, grid); }, 2);
    row("grid_monotone", [&] { grid_monotone(field, levels); }, 3);
    row("hessian_blocks", [&] { tracefree_hessian_field(field); }, 3);
    row("averaged_energy", [&] {
        const TensorField tf = tracefree_hessian_field(field);
        averaged_energy(tf, field, 2.0, -2);
    }, 2);
    return 0;
}
