// Compares the naive serial reference kernels against the optimized ones in
// serial and OpenMP-parallel mode, on shapes representative of the 64x64 and
// 256x256 networks.

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include <omp.h>

#include "tacgap/kernels.hpp"
#include "tacgap/nn/layers.hpp"
#include "tacgap/rng.hpp"

using namespace tacgap;

namespace {

double time_ms(const std::function<void()>& fn, int iters) {
    fn();  // warmup
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < iters; ++i) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / iters;
}

std::vector<float> random_vec(std::size_t n, Rng& rng) {
    std::vector<float> v(n);
    for (float& x : v) x = static_cast<float>(rng.uniform(-1.0, 1.0));
    return v;
}

void bench_gemm(int m, int k, int n, int iters) {
    Rng rng(1);
    const auto a = random_vec(static_cast<std::size_t>(m) * k, rng);
    const auto b = random_vec(static_cast<std::size_t>(k) * n, rng);
    std::vector<float> c(static_cast<std::size_t>(m) * n);

    const double ref_ms =
        time_ms([&] { kernels::ref::gemm(a.data(), b.data(), c.data(), m, k, n); }, iters);
    kernels::set_parallel(false);
    const double serial_ms =
        time_ms([&] { kernels::gemm(a.data(), b.data(), c.data(), m, k, n); }, iters);
    kernels::set_parallel(true);
    const double par_ms =
        time_ms([&] { kernels::gemm(a.data(), b.data(), c.data(), m, k, n); }, iters);

    const double flops = 2.0 * m * k * n;
    std::printf("gemm %4dx%5dx%5d | ref %8.3f ms | serial %8.3f ms (%5.2f GF/s) | omp %8.3f ms "
                "(%5.2f GF/s) | speedup %.2fx\n",
                m, k, n, ref_ms, serial_ms, flops / serial_ms / 1e6, par_ms,
                flops / par_ms / 1e6, serial_ms / par_ms);
}

void bench_conv(int cin, int cout, int size, int iters) {
    Rng rng(2);
    nn::Conv2d conv(cin, cout, 4, 2, 1, false);
    for (float& v : conv.weight.value.v) v = static_cast<float>(rng.uniform(-0.1, 0.1));
    Tensor x(1, cin, size, size);
    for (float& v : x.v) v = static_cast<float>(rng.uniform(-1.0, 1.0));
    nn::Ctx ctx;

    kernels::set_parallel(false);
    const double serial_ms = time_ms([&] { conv.forward(x, ctx, false, nullptr); }, iters);
    kernels::set_parallel(true);
    const double par_ms = time_ms([&] { conv.forward(x, ctx, false, nullptr); }, iters);
    std::printf("conv %3d->%3d @%4d    | serial %8.3f ms | omp %8.3f ms | speedup %.2fx\n", cin,
                cout, size, serial_ms, par_ms, serial_ms / par_ms);
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", omp_get_max_threads());
    bench_gemm(64, 48, 16384, 20);    // first encoder conv at 256x256
    bench_gemm(128, 1024, 4096, 10);  // mid encoder conv
    bench_gemm(512, 8192, 16, 20);    // bottleneck conv
    bench_gemm(256, 2048, 1024, 10);  // decoder conv
    std::printf("\n");
    bench_conv(3, 64, 256, 5);
    bench_conv(64, 128, 128, 5);
    bench_conv(16, 32, 64, 50);
    bench_conv(128, 256, 16, 50);
    kernels::set_parallel(true);
    return 0;
}
