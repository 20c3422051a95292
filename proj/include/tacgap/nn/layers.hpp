#ifndef TACGAP_NN_LAYERS_HPP
#define TACGAP_NN_LAYERS_HPP

#include <memory>
#include <string>
#include <vector>

#include "tacgap/rng.hpp"
#include "tacgap/tensor.hpp"

namespace tacgap::nn {

struct Param {
    std::string name;
    Tensor value;
    Tensor grad;

    Param() = default;
    Param(std::string n, Tensor v) : name(std::move(n)), value(std::move(v)) {
        grad = Tensor(value.n, value.c, value.h, value.w);
    }
};

// Activations and other saved state for one forward pass. Training runs the
// same network several times per step (fake, cycle, identity), so state lives
// in a per-call context rather than in the layer.
struct Ctx {
    std::vector<Tensor> saved;
    std::vector<Ctx> kids;
    void reset() {
        saved.clear();
        kids.clear();
    }
};

class Layer {
public:
    virtual ~Layer() = default;
    virtual Tensor forward(const Tensor& x, Ctx& ctx, bool train, Rng* rng) = 0;
    // Returns grad w.r.t. the input. Parameter gradients are accumulated only
    // when accumulate is true (false = frozen network, e.g. the discriminator
    // inside a generator update).
    virtual Tensor backward(const Tensor& gy, const Ctx& ctx, bool accumulate) = 0;
    virtual void collect_params(const std::string& prefix, std::vector<Param*>& out) {
        (void)prefix;
        (void)out;
    }
    virtual std::string name() const = 0;
};

class Conv2d : public Layer {
public:
    Conv2d(int in_ch, int out_ch, int ksize, int stride, int pad, bool bias);
    Tensor forward(const Tensor& x, Ctx& ctx, bool train, Rng* rng) override;
    Tensor backward(const Tensor& gy, const Ctx& ctx, bool accumulate) override;
    void collect_params(const std::string& prefix, std::vector<Param*>& out) override;
    std::string name() const override { return "conv"; }

    int in_ch, out_ch, ksize, stride, pad;
    Param weight;  // [out_ch, in_ch*k*k]
    Param bias;    // [out_ch], empty when has_bias == false
    bool has_bias;
};

class ConvTranspose2d : public Layer {
public:
    ConvTranspose2d(int in_ch, int out_ch, int ksize, int stride, int pad, bool bias);
    Tensor forward(const Tensor& x, Ctx& ctx, bool train, Rng* rng) override;
    Tensor backward(const Tensor& gy, const Ctx& ctx, bool accumulate) override;
    void collect_params(const std::string& prefix, std::vector<Param*>& out) override;
    std::string name() const override { return "convT"; }

    int in_ch, out_ch, ksize, stride, pad;
    Param weight;  // [in_ch, out_ch*k*k]
    Param bias;
    bool has_bias;
};

// Per-sample, per-channel normalization over the spatial plane. No running
// statistics; affine scale/offset enabled.
class InstanceNorm2d : public Layer {
public:
    explicit InstanceNorm2d(int channels, float eps = 1e-5f);
    Tensor forward(const Tensor& x, Ctx& ctx, bool train, Rng* rng) override;
    Tensor backward(const Tensor& gy, const Ctx& ctx, bool accumulate) override;
    void collect_params(const std::string& prefix, std::vector<Param*>& out) override;
    std::string name() const override { return "inorm"; }

    int channels;
    float eps;
    Param gamma, beta;
};

// Channel-wise batch normalization over (N, H, W) with running statistics for
// inference. Used by the classifier; the GAN networks stay on instance norm.
class BatchNorm : public Layer {
public:
    explicit BatchNorm(int channels, float eps = 1e-5f, float momentum = 0.1f);
    Tensor forward(const Tensor& x, Ctx& ctx, bool train, Rng* rng) override;
    Tensor backward(const Tensor& gy, const Ctx& ctx, bool accumulate) override;
    void collect_params(const std::string& prefix, std::vector<Param*>& out) override;
    std::string name() const override { return "bnorm"; }

    int channels;
    float eps, momentum;
    Param gamma, beta;
    Param running_mean, running_var;  // state, not optimized
};

class Linear : public Layer {
public:
    Linear(int in_features, int out_features, bool bias = true);
    Tensor forward(const Tensor& x, Ctx& ctx, bool train, Rng* rng) override;
    Tensor backward(const Tensor& gy, const Ctx& ctx, bool accumulate) override;
    void collect_params(const std::string& prefix, std::vector<Param*>& out) override;
    std::string name() const override { return "linear"; }

    int in_features, out_features;
    Param weight;  // [out, in]
    Param bias;
    bool has_bias;
};

enum class Act { relu, leaky_relu, elu, tanh };

class Activation : public Layer {
public:
    explicit Activation(Act kind, float slope = 0.0f) : kind(kind), slope(slope) {}
    Tensor forward(const Tensor& x, Ctx& ctx, bool train, Rng* rng) override;
    Tensor backward(const Tensor& gy, const Ctx& ctx, bool accumulate) override;
    std::string name() const override { return "act"; }

    Act kind;
    float slope;
};

class Dropout : public Layer {
public:
    explicit Dropout(float rate) : rate(rate) {}
    Tensor forward(const Tensor& x, Ctx& ctx, bool train, Rng* rng) override;
    Tensor backward(const Tensor& gy, const Ctx& ctx, bool accumulate) override;
    std::string name() const override { return "dropout"; }

    float rate;
};

class Flatten : public Layer {
public:
    Tensor forward(const Tensor& x, Ctx& ctx, bool train, Rng* rng) override;
    Tensor backward(const Tensor& gy, const Ctx& ctx, bool accumulate) override;
    std::string name() const override { return "flatten"; }
};

class Sequential : public Layer {
public:
    Sequential() = default;
    explicit Sequential(std::string tag) : tag_(std::move(tag)) {}

    template <typename L, typename... Args>
    L* emplace(Args&&... args) {
        auto layer = std::make_unique<L>(std::forward<Args>(args)...);
        L* raw = layer.get();
        layers_.push_back(std::move(layer));
        return raw;
    }

    Tensor forward(const Tensor& x, Ctx& ctx, bool train, Rng* rng) override;
    Tensor backward(const Tensor& gy, const Ctx& ctx, bool accumulate) override;
    void collect_params(const std::string& prefix, std::vector<Param*>& out) override;
    std::string name() const override { return tag_.empty() ? "seq" : tag_; }

    std::size_t size() const { return layers_.size(); }
    Layer& at(std::size_t i) { return *layers_[i]; }

private:
    std::vector<std::unique_ptr<Layer>> layers_;
    std::string tag_;
};

// Channel concatenation / split used by U-Net skip connections.
Tensor concat_channels(const Tensor& a, const Tensor& b);
void split_channels(const Tensor& g, int ca, Tensor& ga, Tensor& gb);

void zero_grads(const std::vector<Param*>& params);

}  // namespace tacgap::nn

#endif
