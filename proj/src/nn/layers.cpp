#include "tacgap/nn/layers.hpp"

#include <cmath>
#include <cstring>

#include "tacgap/errors.hpp"
#include "tacgap/kernels.hpp"

namespace tacgap::nn {

using kernels::conv_out_dim;

// ---------------------------------------------------------------- Conv2d

Conv2d::Conv2d(int in_ch, int out_ch, int ksize, int stride, int pad, bool bias)
    : in_ch(in_ch),
      out_ch(out_ch),
      ksize(ksize),
      stride(stride),
      pad(pad),
      weight("weight", Tensor(out_ch, in_ch * ksize * ksize, 1, 1)),
      has_bias(bias) {
    if (has_bias) this->bias = Param("bias", Tensor::vector(out_ch));
}

Tensor Conv2d::forward(const Tensor& x, Ctx& ctx, bool, Rng*) {
    if (x.c != in_ch) throw NumericError("conv: channel mismatch " + x.shape_str());
    const int oh = conv_out_dim(x.h, ksize, stride, pad);
    const int ow = conv_out_dim(x.w, ksize, stride, pad);
    if (oh < 1 || ow < 1) throw NumericError("conv: output would be empty for " + x.shape_str());
    const int patch = in_ch * ksize * ksize;
    Tensor out(x.n, out_ch, oh, ow);
    Tensor cols(x.n, patch, oh, ow);
    for (int b = 0; b < x.n; ++b) {
        float* col = cols.data() + static_cast<std::size_t>(b) * patch * oh * ow;
        kernels::im2col(x.data() + static_cast<std::size_t>(b) * in_ch * x.h * x.w, in_ch, x.h,
                        x.w, ksize, stride, pad, col);
        kernels::gemm(weight.value.data(), col,
                      out.data() + static_cast<std::size_t>(b) * out_ch * oh * ow, out_ch, patch,
                      oh * ow);
    }
    if (has_bias) {
        for (int b = 0; b < x.n; ++b)
            for (int c = 0; c < out_ch; ++c) {
                float* plane = &out.at(b, c, 0, 0);
                const float bv = bias.value.v[c];
                for (int i = 0; i < oh * ow; ++i) plane[i] += bv;
            }
    }
    ctx.saved.clear();
    ctx.saved.push_back(x);     // input
    ctx.saved.push_back(cols);  // patch matrix
    return out;
}

Tensor Conv2d::backward(const Tensor& gy, const Ctx& ctx, bool accumulate) {
    const Tensor& x = ctx.saved[0];
    const Tensor& cols = ctx.saved[1];
    const int oh = gy.h, ow = gy.w;
    const int patch = in_ch * ksize * ksize;
    Tensor gx(x.n, in_ch, x.h, x.w);
    Tensor gw_tmp(out_ch, patch, 1, 1);
    std::vector<float> gcols(static_cast<std::size_t>(patch) * oh * ow);
    for (int b = 0; b < x.n; ++b) {
        const float* gyb = gy.data() + static_cast<std::size_t>(b) * out_ch * oh * ow;
        const float* col = cols.data() + static_cast<std::size_t>(b) * patch * oh * ow;
        if (accumulate) {
            kernels::gemm_abt(gyb, col, gw_tmp.data(), out_ch, oh * ow, patch);
            kernels::axpy(gw_tmp.size(), 1.0f, gw_tmp.data(), weight.grad.data());
            if (has_bias) {
                for (int c = 0; c < out_ch; ++c) {
                    double acc = 0.0;
                    const float* row = gyb + static_cast<std::size_t>(c) * oh * ow;
                    for (int i = 0; i < oh * ow; ++i) acc += row[i];
                    bias.grad.v[c] += static_cast<float>(acc);
                }
            }
        }
        kernels::gemm_atb(weight.value.data(), gyb, gcols.data(), out_ch, patch, oh * ow);
        kernels::col2im(gcols.data(), in_ch, x.h, x.w, ksize, stride, pad,
                        gx.data() + static_cast<std::size_t>(b) * in_ch * x.h * x.w);
    }
    return gx;
}

void Conv2d::collect_params(const std::string& prefix, std::vector<Param*>& out) {
    weight.name = prefix + ".weight";
    out.push_back(&weight);
    if (has_bias) {
        bias.name = prefix + ".bias";
        out.push_back(&bias);
    }
}

// ------------------------------------------------------- ConvTranspose2d

ConvTranspose2d::ConvTranspose2d(int in_ch, int out_ch, int ksize, int stride, int pad, bool bias)
    : in_ch(in_ch),
      out_ch(out_ch),
      ksize(ksize),
      stride(stride),
      pad(pad),
      weight("weight", Tensor(in_ch, out_ch * ksize * ksize, 1, 1)),
      has_bias(bias) {
    if (has_bias) this->bias = Param("bias", Tensor::vector(out_ch));
}

Tensor ConvTranspose2d::forward(const Tensor& x, Ctx& ctx, bool, Rng*) {
    if (x.c != in_ch) throw NumericError("convT: channel mismatch " + x.shape_str());
    const int oh = (x.h - 1) * stride - 2 * pad + ksize;
    const int ow = (x.w - 1) * stride - 2 * pad + ksize;
    const int patch = out_ch * ksize * ksize;
    Tensor out(x.n, out_ch, oh, ow);
    std::vector<float> colbuf(static_cast<std::size_t>(patch) * x.h * x.w);
    for (int b = 0; b < x.n; ++b) {
        const float* xb = x.data() + static_cast<std::size_t>(b) * in_ch * x.h * x.w;
        kernels::gemm_atb(weight.value.data(), xb, colbuf.data(), in_ch, patch, x.h * x.w);
        kernels::col2im(colbuf.data(), out_ch, oh, ow, ksize, stride, pad,
                        out.data() + static_cast<std::size_t>(b) * out_ch * oh * ow);
    }
    if (has_bias) {
        for (int b = 0; b < x.n; ++b)
            for (int c = 0; c < out_ch; ++c) {
                float* plane = &out.at(b, c, 0, 0);
                const float bv = bias.value.v[c];
                for (int i = 0; i < oh * ow; ++i) plane[i] += bv;
            }
    }
    ctx.saved.clear();
    ctx.saved.push_back(x);
    return out;
}

Tensor ConvTranspose2d::backward(const Tensor& gy, const Ctx& ctx, bool accumulate) {
    const Tensor& x = ctx.saved[0];
    const int patch = out_ch * ksize * ksize;
    Tensor gx(x.n, in_ch, x.h, x.w);
    Tensor gw_tmp(in_ch, patch, 1, 1);
    std::vector<float> gcols(static_cast<std::size_t>(patch) * x.h * x.w);
    for (int b = 0; b < x.n; ++b) {
        const float* gyb = gy.data() + static_cast<std::size_t>(b) * out_ch * gy.h * gy.w;
        const float* xb = x.data() + static_cast<std::size_t>(b) * in_ch * x.h * x.w;
        kernels::im2col(gyb, out_ch, gy.h, gy.w, ksize, stride, pad, gcols.data());
        kernels::gemm(weight.value.data(), gcols.data(),
                      gx.data() + static_cast<std::size_t>(b) * in_ch * x.h * x.w, in_ch, patch,
                      x.h * x.w);
        if (accumulate) {
            kernels::gemm_abt(xb, gcols.data(), gw_tmp.data(), in_ch, x.h * x.w, patch);
            kernels::axpy(gw_tmp.size(), 1.0f, gw_tmp.data(), weight.grad.data());
            if (has_bias) {
                for (int c = 0; c < out_ch; ++c) {
                    double acc = 0.0;
                    const float* row = gyb + static_cast<std::size_t>(c) * gy.h * gy.w;
                    for (int i = 0; i < gy.h * gy.w; ++i) acc += row[i];
                    bias.grad.v[c] += static_cast<float>(acc);
                }
            }
        }
    }
    return gx;
}

void ConvTranspose2d::collect_params(const std::string& prefix, std::vector<Param*>& out) {
    weight.name = prefix + ".weight";
    out.push_back(&weight);
    if (has_bias) {
        bias.name = prefix + ".bias";
        out.push_back(&bias);
    }
}

// --------------------------------------------------------- InstanceNorm2d

InstanceNorm2d::InstanceNorm2d(int channels, float eps)
    : channels(channels),
      eps(eps),
      gamma("gamma", Tensor::vector(channels, 1.0f)),
      beta("beta", Tensor::vector(channels, 0.0f)) {}

Tensor InstanceNorm2d::forward(const Tensor& x, Ctx& ctx, bool, Rng*) {
    const int plane = x.plane();
    Tensor xhat(x.n, x.c, x.h, x.w);
    Tensor inv_std(x.n, x.c, 1, 1);
    Tensor out(x.n, x.c, x.h, x.w);
    const bool par = kernels::parallel_enabled();
#pragma omp parallel for schedule(static) collapse(2) if (par)
    for (int b = 0; b < x.n; ++b)
        for (int c = 0; c < x.c; ++c) {
            const float* src = &x.at(b, c, 0, 0);
            double mean = 0.0;
            for (int i = 0; i < plane; ++i) mean += src[i];
            mean /= plane;
            double var = 0.0;
            for (int i = 0; i < plane; ++i) {
                const double d = src[i] - mean;
                var += d * d;
            }
            var /= plane;
            const float is = static_cast<float>(1.0 / std::sqrt(var + eps));
            inv_std.at(b, c, 0, 0) = is;
            float* xh = &xhat.at(b, c, 0, 0);
            float* dst = &out.at(b, c, 0, 0);
            const float g = gamma.value.v[c], be = beta.value.v[c];
            const float m = static_cast<float>(mean);
            for (int i = 0; i < plane; ++i) {
                xh[i] = (src[i] - m) * is;
                dst[i] = g * xh[i] + be;
            }
        }
    ctx.saved.clear();
    ctx.saved.push_back(std::move(xhat));
    ctx.saved.push_back(std::move(inv_std));
    return out;
}

Tensor InstanceNorm2d::backward(const Tensor& gy, const Ctx& ctx, bool accumulate) {
    const Tensor& xhat = ctx.saved[0];
    const Tensor& inv_std = ctx.saved[1];
    const int plane = gy.plane();
    Tensor gx(gy.n, gy.c, gy.h, gy.w);
    std::vector<double> ggamma(channels, 0.0), gbeta(channels, 0.0);
    for (int b = 0; b < gy.n; ++b)
        for (int c = 0; c < gy.c; ++c) {
            const float* g = &gy.at(b, c, 0, 0);
            const float* xh = &xhat.at(b, c, 0, 0);
            const float gam = gamma.value.v[c];
            const float is = inv_std.at(b, c, 0, 0);
            double sum_g = 0.0, sum_gx = 0.0;
            for (int i = 0; i < plane; ++i) {
                sum_g += g[i];
                sum_gx += static_cast<double>(g[i]) * xh[i];
            }
            if (accumulate) {
                ggamma[c] += sum_gx;
                gbeta[c] += sum_g;
            }
            const float mg = static_cast<float>(sum_g / plane);
            const float mgx = static_cast<float>(sum_gx / plane);
            float* dst = &gx.at(b, c, 0, 0);
            for (int i = 0; i < plane; ++i)
                dst[i] = gam * is * (g[i] - mg - xh[i] * mgx);
        }
    if (accumulate)
        for (int c = 0; c < channels; ++c) {
            gamma.grad.v[c] += static_cast<float>(ggamma[c]);
            beta.grad.v[c] += static_cast<float>(gbeta[c]);
        }
    return gx;
}

void InstanceNorm2d::collect_params(const std::string& prefix, std::vector<Param*>& out) {
    gamma.name = prefix + ".gamma";
    beta.name = prefix + ".beta";
    out.push_back(&gamma);
    out.push_back(&beta);
}

// --------------------------------------------------------------- BatchNorm

BatchNorm::BatchNorm(int channels, float eps, float momentum)
    : channels(channels),
      eps(eps),
      momentum(momentum),
      gamma("gamma", Tensor::vector(channels, 1.0f)),
      beta("beta", Tensor::vector(channels, 0.0f)),
      running_mean("running_mean", Tensor::vector(channels, 0.0f)),
      running_var("running_var", Tensor::vector(channels, 1.0f)) {}

Tensor BatchNorm::forward(const Tensor& x, Ctx& ctx, bool train, Rng*) {
    const int plane = x.plane();
    const int count = x.n * plane;
    Tensor out(x.n, x.c, x.h, x.w);
    Tensor xhat(x.n, x.c, x.h, x.w);
    Tensor inv_std(1, channels, 1, 1);
    for (int c = 0; c < channels; ++c) {
        double mean, var;
        if (train) {
            double m = 0.0;
            for (int b = 0; b < x.n; ++b) {
                const float* src = &x.at(b, c, 0, 0);
                for (int i = 0; i < plane; ++i) m += src[i];
            }
            mean = m / count;
            double v2 = 0.0;
            for (int b = 0; b < x.n; ++b) {
                const float* src = &x.at(b, c, 0, 0);
                for (int i = 0; i < plane; ++i) {
                    const double d = src[i] - mean;
                    v2 += d * d;
                }
            }
            var = v2 / count;
            running_mean.value.v[c] =
                (1.0f - momentum) * running_mean.value.v[c] + momentum * static_cast<float>(mean);
            running_var.value.v[c] =
                (1.0f - momentum) * running_var.value.v[c] + momentum * static_cast<float>(var);
        } else {
            mean = running_mean.value.v[c];
            var = running_var.value.v[c];
        }
        const float is = static_cast<float>(1.0 / std::sqrt(var + eps));
        inv_std.v[c] = is;
        const float g = gamma.value.v[c], be = beta.value.v[c];
        const float m = static_cast<float>(mean);
        for (int b = 0; b < x.n; ++b) {
            const float* src = &x.at(b, c, 0, 0);
            float* xh = &xhat.at(b, c, 0, 0);
            float* dst = &out.at(b, c, 0, 0);
            for (int i = 0; i < plane; ++i) {
                xh[i] = (src[i] - m) * is;
                dst[i] = g * xh[i] + be;
            }
        }
    }
    ctx.saved.clear();
    ctx.saved.push_back(std::move(xhat));
    ctx.saved.push_back(std::move(inv_std));
    ctx.saved.push_back(Tensor::vector(1, train ? 1.0f : 0.0f));
    return out;
}

Tensor BatchNorm::backward(const Tensor& gy, const Ctx& ctx, bool accumulate) {
    const Tensor& xhat = ctx.saved[0];
    const Tensor& inv_std = ctx.saved[1];
    const bool trained = ctx.saved[2].v[0] > 0.5f;
    const int plane = gy.plane();
    const int count = gy.n * plane;
    Tensor gx(gy.n, gy.c, gy.h, gy.w);
    for (int c = 0; c < channels; ++c) {
        const float gam = gamma.value.v[c];
        const float is = inv_std.v[c];
        double sum_g = 0.0, sum_gx = 0.0;
        for (int b = 0; b < gy.n; ++b) {
            const float* g = &gy.at(b, c, 0, 0);
            const float* xh = &xhat.at(b, c, 0, 0);
            for (int i = 0; i < plane; ++i) {
                sum_g += g[i];
                sum_gx += static_cast<double>(g[i]) * xh[i];
            }
        }
        if (accumulate) {
            gamma.grad.v[c] += static_cast<float>(sum_gx);
            beta.grad.v[c] += static_cast<float>(sum_g);
        }
        const float mg = static_cast<float>(sum_g / count);
        const float mgx = static_cast<float>(sum_gx / count);
        for (int b = 0; b < gy.n; ++b) {
            const float* g = &gy.at(b, c, 0, 0);
            const float* xh = &xhat.at(b, c, 0, 0);
            float* dst = &gx.at(b, c, 0, 0);
            for (int i = 0; i < plane; ++i) {
                // In eval mode the statistics are constants.
                dst[i] = trained ? gam * is * (g[i] - mg - xh[i] * mgx) : gam * is * g[i];
            }
        }
    }
    return gx;
}

void BatchNorm::collect_params(const std::string& prefix, std::vector<Param*>& out) {
    gamma.name = prefix + ".gamma";
    beta.name = prefix + ".beta";
    out.push_back(&gamma);
    out.push_back(&beta);
}

// ------------------------------------------------------------------ Linear

Linear::Linear(int in_features, int out_features, bool bias)
    : in_features(in_features),
      out_features(out_features),
      weight("weight", Tensor(out_features, in_features, 1, 1)),
      has_bias(bias) {
    if (has_bias) this->bias = Param("bias", Tensor::vector(out_features));
}

Tensor Linear::forward(const Tensor& x, Ctx& ctx, bool, Rng*) {
    if (x.c * x.h * x.w != in_features)
        throw NumericError("linear: feature mismatch " + x.shape_str());
    Tensor out(x.n, out_features, 1, 1);
    kernels::gemm_abt(x.data(), weight.value.data(), out.data(), x.n, in_features, out_features);
    if (has_bias)
        for (int b = 0; b < x.n; ++b)
            for (int j = 0; j < out_features; ++j) out.v[b * out_features + j] += bias.value.v[j];
    ctx.saved.clear();
    ctx.saved.push_back(x);
    return out;
}

Tensor Linear::backward(const Tensor& gy, const Ctx& ctx, bool accumulate) {
    const Tensor& x = ctx.saved[0];
    if (accumulate) {
        Tensor gw_tmp(out_features, in_features, 1, 1);
        kernels::gemm_atb(gy.data(), x.data(), gw_tmp.data(), x.n, out_features, in_features);
        kernels::axpy(gw_tmp.size(), 1.0f, gw_tmp.data(), weight.grad.data());
        if (has_bias)
            for (int j = 0; j < out_features; ++j) {
                double acc = 0.0;
                for (int b = 0; b < x.n; ++b) acc += gy.v[b * out_features + j];
                bias.grad.v[j] += static_cast<float>(acc);
            }
    }
    Tensor gx(x.n, x.c, x.h, x.w);
    kernels::gemm(gy.data(), weight.value.data(), gx.data(), x.n, out_features, in_features);
    return gx;
}

void Linear::collect_params(const std::string& prefix, std::vector<Param*>& out) {
    weight.name = prefix + ".weight";
    out.push_back(&weight);
    if (has_bias) {
        bias.name = prefix + ".bias";
        out.push_back(&bias);
    }
}

// -------------------------------------------------------------- Activation

Tensor Activation::forward(const Tensor& x, Ctx& ctx, bool, Rng*) {
    Tensor out(x.n, x.c, x.h, x.w);
    switch (kind) {
        case Act::relu:
            for (std::size_t i = 0; i < x.size(); ++i) out.v[i] = x.v[i] > 0.0f ? x.v[i] : 0.0f;
            break;
        case Act::leaky_relu:
            for (std::size_t i = 0; i < x.size(); ++i)
                out.v[i] = x.v[i] > 0.0f ? x.v[i] : slope * x.v[i];
            break;
        case Act::elu:
            for (std::size_t i = 0; i < x.size(); ++i)
                out.v[i] = x.v[i] > 0.0f ? x.v[i] : std::expm1(x.v[i]);
            break;
        case Act::tanh:
            for (std::size_t i = 0; i < x.size(); ++i) out.v[i] = std::tanh(x.v[i]);
            break;
    }
    ctx.saved.clear();
    if (kind == Act::tanh || kind == Act::elu)
        ctx.saved.push_back(out);  // derivative from the output
    else
        ctx.saved.push_back(x);
    return out;
}

Tensor Activation::backward(const Tensor& gy, const Ctx& ctx, bool) {
    const Tensor& s = ctx.saved[0];
    Tensor gx(gy.n, gy.c, gy.h, gy.w);
    switch (kind) {
        case Act::relu:
            for (std::size_t i = 0; i < gy.size(); ++i)
                gx.v[i] = s.v[i] > 0.0f ? gy.v[i] : 0.0f;
            break;
        case Act::leaky_relu:
            for (std::size_t i = 0; i < gy.size(); ++i)
                gx.v[i] = s.v[i] > 0.0f ? gy.v[i] : slope * gy.v[i];
            break;
        case Act::elu:
            for (std::size_t i = 0; i < gy.size(); ++i)
                gx.v[i] = s.v[i] > 0.0f ? gy.v[i] : gy.v[i] * (s.v[i] + 1.0f);
            break;
        case Act::tanh:
            for (std::size_t i = 0; i < gy.size(); ++i)
                gx.v[i] = gy.v[i] * (1.0f - s.v[i] * s.v[i]);
            break;
    }
    return gx;
}

// ----------------------------------------------------------------- Dropout

Tensor Dropout::forward(const Tensor& x, Ctx& ctx, bool train, Rng* rng) {
    ctx.saved.clear();
    if (!train || rate <= 0.0f) return x;
    if (!rng) throw NumericError("dropout: training forward needs an rng");
    const float keep = 1.0f - rate;
    Tensor mask(x.n, x.c, x.h, x.w);
    Tensor out(x.n, x.c, x.h, x.w);
    for (std::size_t i = 0; i < x.size(); ++i) {
        // Inverted dropout: scale at train time, identity at inference.
        mask.v[i] = rng->bernoulli(keep) ? 1.0f / keep : 0.0f;
        out.v[i] = x.v[i] * mask.v[i];
    }
    ctx.saved.push_back(std::move(mask));
    return out;
}

Tensor Dropout::backward(const Tensor& gy, const Ctx& ctx, bool) {
    if (ctx.saved.empty()) return gy;
    const Tensor& mask = ctx.saved[0];
    Tensor gx(gy.n, gy.c, gy.h, gy.w);
    for (std::size_t i = 0; i < gy.size(); ++i) gx.v[i] = gy.v[i] * mask.v[i];
    return gx;
}

// ----------------------------------------------------------------- Flatten

Tensor Flatten::forward(const Tensor& x, Ctx& ctx, bool, Rng*) {
    ctx.saved.clear();
    Tensor shape = Tensor::vector(3);
    shape.v = {static_cast<float>(x.c), static_cast<float>(x.h), static_cast<float>(x.w)};
    ctx.saved.push_back(std::move(shape));
    Tensor out = x;
    out.c = x.c * x.h * x.w;
    out.h = out.w = 1;
    return out;
}

Tensor Flatten::backward(const Tensor& gy, const Ctx& ctx, bool) {
    const Tensor& shape = ctx.saved[0];
    Tensor gx = gy;
    gx.c = static_cast<int>(shape.v[0]);
    gx.h = static_cast<int>(shape.v[1]);
    gx.w = static_cast<int>(shape.v[2]);
    return gx;
}

// -------------------------------------------------------------- Sequential

Tensor Sequential::forward(const Tensor& x, Ctx& ctx, bool train, Rng* rng) {
    ctx.reset();
    ctx.kids.resize(layers_.size());
    Tensor cur = x;
    for (std::size_t i = 0; i < layers_.size(); ++i)
        cur = layers_[i]->forward(cur, ctx.kids[i], train, rng);
    return cur;
}

Tensor Sequential::backward(const Tensor& gy, const Ctx& ctx, bool accumulate) {
    Tensor cur = gy;
    for (std::size_t i = layers_.size(); i-- > 0;)
        cur = layers_[i]->backward(cur, ctx.kids[i], accumulate);
    return cur;
}

void Sequential::collect_params(const std::string& prefix, std::vector<Param*>& out) {
    for (std::size_t i = 0; i < layers_.size(); ++i)
        layers_[i]->collect_params(prefix + "." + std::to_string(i) + "." + layers_[i]->name(),
                                   out);
}

// ------------------------------------------------------------------ Concat

Tensor concat_channels(const Tensor& a, const Tensor& b) {
    if (a.n != b.n || a.h != b.h || a.w != b.w)
        throw NumericError("concat: spatial mismatch " + a.shape_str() + " vs " + b.shape_str());
    Tensor out(a.n, a.c + b.c, a.h, a.w);
    const std::size_t plane = static_cast<std::size_t>(a.h) * a.w;
    for (int bidx = 0; bidx < a.n; ++bidx) {
        std::memcpy(&out.at(bidx, 0, 0, 0), &a.at(bidx, 0, 0, 0), sizeof(float) * a.c * plane);
        std::memcpy(&out.at(bidx, a.c, 0, 0), &b.at(bidx, 0, 0, 0), sizeof(float) * b.c * plane);
    }
    return out;
}

void split_channels(const Tensor& g, int ca, Tensor& ga, Tensor& gb) {
    const int cb = g.c - ca;
    ga = Tensor(g.n, ca, g.h, g.w);
    gb = Tensor(g.n, cb, g.h, g.w);
    const std::size_t plane = static_cast<std::size_t>(g.h) * g.w;
    for (int bidx = 0; bidx < g.n; ++bidx) {
        std::memcpy(&ga.at(bidx, 0, 0, 0), &g.at(bidx, 0, 0, 0), sizeof(float) * ca * plane);
        std::memcpy(&gb.at(bidx, 0, 0, 0), &g.at(bidx, ca, 0, 0), sizeof(float) * cb * plane);
    }
}

void zero_grads(const std::vector<Param*>& params) {
    for (Param* p : params) p->grad.zero();
}

}  // namespace tacgap::nn
