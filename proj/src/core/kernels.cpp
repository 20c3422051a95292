#include "tacgap/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace tacgap::kernels {

namespace {
bool initial_parallel() {
    const char* env = std::getenv("TACGAP_DETERMINISTIC");
    if (env && env[0] == '1') return false;
    return true;
}
bool g_parallel = initial_parallel();
}  // namespace

bool parallel_enabled() { return g_parallel; }
void set_parallel(bool on) { g_parallel = on; }

int conv_out_dim(int in, int ksize, int stride, int pad) {
    return (in + 2 * pad - ksize) / stride + 1;
}

// Row-parallel GEMM. Each C row is produced by exactly one thread with a
// fixed k-then-n loop order, which keeps results independent of the thread
// count. The inner n loop vectorizes.
void gemm(const float* a, const float* b, float* c, int m, int k, int n) {
    const bool par = g_parallel;
#pragma omp parallel for schedule(static) if (par)
    for (int i = 0; i < m; ++i) {
        float* crow = c + static_cast<std::size_t>(i) * n;
        std::memset(crow, 0, sizeof(float) * n);
        const float* arow = a + static_cast<std::size_t>(i) * k;
        for (int p = 0; p < k; ++p) {
            const float av = arow[p];
            if (av == 0.0f) continue;
            const float* brow = b + static_cast<std::size_t>(p) * n;
            for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

void gemm_abt(const float* a, const float* b, float* c, int m, int n, int k) {
    const bool par = g_parallel;
#pragma omp parallel for schedule(static) if (par)
    for (int i = 0; i < m; ++i) {
        const float* arow = a + static_cast<std::size_t>(i) * n;
        float* crow = c + static_cast<std::size_t>(i) * k;
        for (int j = 0; j < k; ++j) {
            const float* brow = b + static_cast<std::size_t>(j) * n;
            float acc = 0.0f;
            for (int p = 0; p < n; ++p) acc += arow[p] * brow[p];
            crow[j] = acc;
        }
    }
}

void gemm_atb(const float* a, const float* b, float* c, int m, int k, int n) {
    const bool par = g_parallel;
#pragma omp parallel for schedule(static) if (par)
    for (int i = 0; i < k; ++i) {
        float* crow = c + static_cast<std::size_t>(i) * n;
        std::memset(crow, 0, sizeof(float) * n);
        for (int p = 0; p < m; ++p) {
            const float av = a[static_cast<std::size_t>(p) * k + i];
            if (av == 0.0f) continue;
            const float* brow = b + static_cast<std::size_t>(p) * n;
            for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

void im2col(const float* img, int channels, int height, int width, int ksize, int stride, int pad,
            float* cols) {
    const int oh = conv_out_dim(height, ksize, stride, pad);
    const int ow = conv_out_dim(width, ksize, stride, pad);
    const int patch = channels * ksize * ksize;
    const bool par = g_parallel;
#pragma omp parallel for schedule(static) if (par)
    for (int r = 0; r < patch; ++r) {
        const int c = r / (ksize * ksize);
        const int dy = (r / ksize) % ksize;
        const int dx = r % ksize;
        float* out = cols + static_cast<std::size_t>(r) * oh * ow;
        const float* src = img + static_cast<std::size_t>(c) * height * width;
        for (int y = 0; y < oh; ++y) {
            const int iy = y * stride - pad + dy;
            if (iy < 0 || iy >= height) {
                std::memset(out + static_cast<std::size_t>(y) * ow, 0, sizeof(float) * ow);
                continue;
            }
            for (int x = 0; x < ow; ++x) {
                const int ix = x * stride - pad + dx;
                out[static_cast<std::size_t>(y) * ow + x] =
                    (ix >= 0 && ix < width) ? src[static_cast<std::size_t>(iy) * width + ix] : 0.0f;
            }
        }
    }
}

void col2im(const float* cols, int channels, int height, int width, int ksize, int stride, int pad,
            float* img) {
    const int oh = conv_out_dim(height, ksize, stride, pad);
    const int ow = conv_out_dim(width, ksize, stride, pad);
    const bool par = g_parallel;
#pragma omp parallel for schedule(static) if (par)
    for (int c = 0; c < channels; ++c) {
        float* dst = img + static_cast<std::size_t>(c) * height * width;
        std::memset(dst, 0, sizeof(float) * height * width);
        for (int iy = 0; iy < height; ++iy) {
            for (int ix = 0; ix < width; ++ix) {
                float acc = 0.0f;
                // Every patch (y, x, dy, dx) covering pixel (iy, ix).
                for (int dy = 0; dy < ksize; ++dy) {
                    const int ty = iy + pad - dy;
                    if (ty < 0 || ty % stride != 0) continue;
                    const int y = ty / stride;
                    if (y >= oh) continue;
                    for (int dx = 0; dx < ksize; ++dx) {
                        const int tx = ix + pad - dx;
                        if (tx < 0 || tx % stride != 0) continue;
                        const int x = tx / stride;
                        if (x >= ow) continue;
                        const int r = (c * ksize + dy) * ksize + dx;
                        acc += cols[(static_cast<std::size_t>(r) * oh + y) * ow + x];
                    }
                }
                dst[static_cast<std::size_t>(iy) * width + ix] = acc;
            }
        }
    }
}

void axpy(std::size_t len, float alpha, const float* x, float* y) {
    const bool par = g_parallel && len > (1u << 14);
#pragma omp parallel for schedule(static) if (par)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(len); ++i)
        y[i] += alpha * x[i];
}

void scale(std::size_t len, float alpha, float* x) {
    const bool par = g_parallel && len > (1u << 14);
#pragma omp parallel for schedule(static) if (par)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(len); ++i)
        x[i] *= alpha;
}

void add(std::size_t len, const float* x, const float* y, float* out) {
    const bool par = g_parallel && len > (1u << 14);
#pragma omp parallel for schedule(static) if (par)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(len); ++i)
        out[i] = x[i] + y[i];
}

namespace ref {

void gemm(const float* a, const float* b, float* c, int m, int k, int n) {
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int p = 0; p < k; ++p)
                acc += static_cast<double>(a[static_cast<std::size_t>(i) * k + p]) *
                       b[static_cast<std::size_t>(p) * n + j];
            c[static_cast<std::size_t>(i) * n + j] = static_cast<float>(acc);
        }
}

void gemm_abt(const float* a, const float* b, float* c, int m, int n, int k) {
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < k; ++j) {
            double acc = 0.0;
            for (int p = 0; p < n; ++p)
                acc += static_cast<double>(a[static_cast<std::size_t>(i) * n + p]) *
                       b[static_cast<std::size_t>(j) * n + p];
            c[static_cast<std::size_t>(i) * k + j] = static_cast<float>(acc);
        }
}

void gemm_atb(const float* a, const float* b, float* c, int m, int k, int n) {
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int p = 0; p < m; ++p)
                acc += static_cast<double>(a[static_cast<std::size_t>(p) * k + i]) *
                       b[static_cast<std::size_t>(p) * n + j];
            c[static_cast<std::size_t>(i) * n + j] = static_cast<float>(acc);
        }
}

void im2col(const float* img, int channels, int height, int width, int ksize, int stride, int pad,
            float* cols) {
    const int oh = conv_out_dim(height, ksize, stride, pad);
    const int ow = conv_out_dim(width, ksize, stride, pad);
    for (int c = 0; c < channels; ++c)
        for (int dy = 0; dy < ksize; ++dy)
            for (int dx = 0; dx < ksize; ++dx) {
                const int r = (c * ksize + dy) * ksize + dx;
                for (int y = 0; y < oh; ++y)
                    for (int x = 0; x < ow; ++x) {
                        const int iy = y * stride - pad + dy;
                        const int ix = x * stride - pad + dx;
                        float val = 0.0f;
                        if (iy >= 0 && iy < height && ix >= 0 && ix < width)
                            val = img[(static_cast<std::size_t>(c) * height + iy) * width + ix];
                        cols[(static_cast<std::size_t>(r) * oh + y) * ow + x] = val;
                    }
            }
}

void col2im(const float* cols, int channels, int height, int width, int ksize, int stride, int pad,
            float* img) {
    const int oh = conv_out_dim(height, ksize, stride, pad);
    const int ow = conv_out_dim(width, ksize, stride, pad);
    std::memset(img, 0, sizeof(float) * channels * height * width);
    for (int c = 0; c < channels; ++c)
        for (int dy = 0; dy < ksize; ++dy)
            for (int dx = 0; dx < ksize; ++dx) {
                const int r = (c * ksize + dy) * ksize + dx;
                for (int y = 0; y < oh; ++y)
                    for (int x = 0; x < ow; ++x) {
                        const int iy = y * stride - pad + dy;
                        const int ix = x * stride - pad + dx;
                        if (iy >= 0 && iy < height && ix >= 0 && ix < width)
                            img[(static_cast<std::size_t>(c) * height + iy) * width + ix] +=
                                cols[(static_cast<std::size_t>(r) * oh + y) * ow + x];
                    }
            }
}

}  // namespace ref

}  // namespace tacgap::kernels
