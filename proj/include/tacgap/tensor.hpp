#ifndef TACGAP_TENSOR_HPP
#define TACGAP_TENSOR_HPP

#include <cassert>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace tacgap {

// Dense NCHW float tensor. Vectors and matrices use h = w = 1.
struct Tensor {
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<float> v;

    Tensor() = default;
    Tensor(int n_, int c_, int h_, int w_, float fill = 0.0f)
        : n(n_), c(c_), h(h_), w(w_), v(static_cast<std::size_t>(n_) * c_ * h_ * w_, fill) {}

    static Tensor vector(int len, float fill = 0.0f) { return Tensor(1, len, 1, 1, fill); }

    std::size_t size() const { return v.size(); }
    bool empty() const { return v.empty(); }
    int plane() const { return h * w; }

    float* data() { return v.data(); }
    const float* data() const { return v.data(); }

    float& at(int in, int ic, int ih, int iw) {
        return v[((static_cast<std::size_t>(in) * c + ic) * h + ih) * w + iw];
    }
    const float& at(int in, int ic, int ih, int iw) const {
        return v[((static_cast<std::size_t>(in) * c + ic) * h + ih) * w + iw];
    }

    bool same_shape(const Tensor& o) const { return n == o.n && c == o.c && h == o.h && w == o.w; }

    void fill(float value) { std::fill(v.begin(), v.end(), value); }
    void zero() { fill(0.0f); }

    bool all_finite() const {
        for (float x : v)
            if (!std::isfinite(x)) return false;
        return true;
    }

    std::string shape_str() const {
        return "[" + std::to_string(n) + "x" + std::to_string(c) + "x" + std::to_string(h) + "x" +
               std::to_string(w) + "]";
    }
};

}  // namespace tacgap

#endif
