#ifndef TACGAP_KERNELS_HPP
#define TACGAP_KERNELS_HPP

#include <cstddef>

namespace tacgap::kernels {

// When false (default: TACGAP_DETERMINISTIC=1 in the environment, or an
// explicit call to set_parallel), every kernel below runs on a single thread.
// The parallel paths partition work per output element and never reorder the
// per-element accumulation, so results are bit-identical either way; the
// switch exists as the guaranteed-serial fallback and for benchmarking.
bool parallel_enabled();
void set_parallel(bool on);

// C[m x n] = A[m x k] * B[k x n], row major.
void gemm(const float* a, const float* b, float* c, int m, int k, int n);
// C[m x k] = A[m x n] * B[k x n]^T
void gemm_abt(const float* a, const float* b, float* c, int m, int n, int k);
// C[k x n] = A[m x k]^T * B[m x n]
void gemm_atb(const float* a, const float* b, float* c, int m, int k, int n);

// Patch matrix layout: rows = c*kh*kw, cols = oh*ow.
void im2col(const float* img, int channels, int height, int width, int ksize, int stride, int pad,
            float* cols);
// Adjoint of im2col: scatter-adds patch columns back into an image. Gather
// formulation (one writer per pixel), so it is race-free and deterministic.
void col2im(const float* cols, int channels, int height, int width, int ksize, int stride, int pad,
            float* img);

int conv_out_dim(int in, int ksize, int stride, int pad);

void axpy(std::size_t len, float alpha, const float* x, float* y);
void scale(std::size_t len, float alpha, float* x);
void add(std::size_t len, const float* x, const float* y, float* out);

// Naive single-thread reference implementations, kept for correctness tests
// and as the benchmark baseline.
namespace ref {
void gemm(const float* a, const float* b, float* c, int m, int k, int n);
void gemm_abt(const float* a, const float* b, float* c, int m, int n, int k);
void gemm_atb(const float* a, const float* b, float* c, int m, int k, int n);
void im2col(const float* img, int channels, int height, int width, int ksize, int stride, int pad,
            float* cols);
void col2im(const float* cols, int channels, int height, int width, int ksize, int stride, int pad,
            float* img);
}  // namespace ref

}  // namespace tacgap::kernels

#endif
