#include "tacgap/nn/models.hpp"

#include <algorithm>
#include <cmath>

#include "tacgap/errors.hpp"
#include "tacgap/kernels.hpp"

namespace tacgap::nn {

namespace {
bool is_pow2(int v) { return v >= 1 && (v & (v - 1)) == 0; }
}  // namespace

// ----------------------------------------------------------- GeneratorSpec

void GeneratorSpec::validate() const {
    if (input_size < 8 || !is_pow2(input_size))
        throw ConfigError("generator: input_size must be a power of two >= 8, got " +
                          std::to_string(input_size));
    if (base_filters < 1) throw ConfigError("generator: base_filters must be >= 1");
    if (max_filters < base_filters) throw ConfigError("generator: max_filters < base_filters");
    if (dropout_rate < 0.0f || dropout_rate >= 1.0f)
        throw ConfigError("generator: dropout_rate must be in [0, 1)");
    if (in_channels < 1 || out_channels < 1) throw ConfigError("generator: channels must be >= 1");
}

int GeneratorSpec::depth() const {
    int d = 0, s = input_size;
    while (s > 1) {
        s /= 2;
        ++d;
    }
    return d;
}

std::vector<int> GeneratorSpec::encoder_filters() const {
    std::vector<int> f;
    int cur = base_filters;
    for (int i = 0; i < depth(); ++i) {
        f.push_back(std::min(cur, max_filters));
        cur *= 2;
    }
    return f;
}

// ----------------------------------------------------------- UNetGenerator

UNetGenerator::UNetGenerator(const GeneratorSpec& spec) : spec_(spec) {
    spec_.validate();
    const std::vector<int> f = spec_.encoder_filters();
    const int depth = static_cast<int>(f.size());

    enc_.resize(depth);
    for (int i = 0; i < depth; ++i) {
        const int cin = (i == 0) ? spec_.in_channels : f[i - 1];
        // First downsample block skips normalization.
        enc_[i].emplace<Conv2d>(cin, f[i], 4, 2, 1, i == 0);
        if (i > 0) enc_[i].emplace<InstanceNorm2d>(f[i]);
        enc_[i].emplace<Activation>(Act::leaky_relu, spec_.leaky_slope);
    }

    dec_.resize(depth - 1);
    for (int j = 0; j < depth - 1; ++j) {
        const int mirror = depth - 2 - j;  // encoder block whose output we mirror
        const int cout = f[mirror];
        const int cin = (j == 0) ? f[depth - 1] : 2 * f[depth - 1 - j];
        dec_in_.push_back(cin);
        dec_out_.push_back(cout);
        dec_[j].emplace<ConvTranspose2d>(cin, cout, 4, 2, 1, false);
        dec_[j].emplace<InstanceNorm2d>(cout);
        if (j < spec_.dropout_blocks && spec_.dropout_rate > 0.0f)
            dec_[j].emplace<Dropout>(spec_.dropout_rate);
        dec_[j].emplace<Activation>(Act::relu);
    }

    final_.emplace<ConvTranspose2d>(2 * f[0], spec_.out_channels, 4, 2, 1, true);
    final_.emplace<Activation>(Act::tanh);
}

Tensor UNetGenerator::forward(const Tensor& x, UNetCtx& ctx, bool train, Rng* rng) {
    if (x.h != spec_.input_size || x.w != spec_.input_size || x.c != spec_.in_channels)
        throw NumericError("generator: expected " + std::to_string(spec_.in_channels) + "x" +
                           std::to_string(spec_.input_size) + "x" +
                           std::to_string(spec_.input_size) + " input, got " + x.shape_str());
    const int depth = static_cast<int>(enc_.size());
    ctx.enc.assign(depth, Ctx{});
    ctx.dec.assign(depth - 1, Ctx{});
    ctx.fin.reset();

    std::vector<Tensor> skips;
    skips.reserve(depth);
    Tensor cur = x;
    for (int i = 0; i < depth; ++i) {
        cur = enc_[i].forward(cur, ctx.enc[i], train, rng);
        skips.push_back(cur);
    }
    for (int j = 0; j < depth - 1; ++j) {
        cur = dec_[j].forward(cur, ctx.dec[j], train, rng);
        cur = concat_channels(cur, skips[depth - 2 - j]);
    }
    return final_.forward(cur, ctx.fin, train, rng);
}

Tensor UNetGenerator::backward(const Tensor& gy, const UNetCtx& ctx, bool accumulate) {
    const int depth = static_cast<int>(enc_.size());
    Tensor g = final_.backward(gy, ctx.fin, accumulate);
    std::vector<Tensor> gskip(depth);  // skip-path gradients at encoder outputs
    for (int j = depth - 2; j >= 0; --j) {
        Tensor gd, gs;
        split_channels(g, dec_out_[j], gd, gs);
        gskip[depth - 2 - j] = std::move(gs);
        g = dec_[j].backward(gd, ctx.dec[j], accumulate);
    }
    for (int i = depth - 1; i >= 1; --i) {
        Tensor gx = enc_[i].backward(g, ctx.enc[i], accumulate);
        kernels::add(gx.size(), gx.data(), gskip[i - 1].data(), gx.data());
        g = std::move(gx);
    }
    return enc_[0].backward(g, ctx.enc[0], accumulate);
}

std::vector<Param*> UNetGenerator::params(const std::string& prefix) {
    std::vector<Param*> out;
    for (std::size_t i = 0; i < enc_.size(); ++i)
        enc_[i].collect_params(prefix + ".enc" + std::to_string(i), out);
    for (std::size_t j = 0; j < dec_.size(); ++j)
        dec_[j].collect_params(prefix + ".dec" + std::to_string(j), out);
    final_.collect_params(prefix + ".head", out);
    return out;
}

// ------------------------------------------------------- DiscriminatorSpec

void DiscriminatorSpec::validate() const {
    if (stride2_blocks < 1) throw ConfigError("discriminator: need >= 1 stride-2 block");
    if (base_filters < 1) throw ConfigError("discriminator: base_filters must be >= 1");
    if (patch_grid() < 1)
        throw ConfigError("discriminator: input " + std::to_string(input_size) +
                          " yields an empty patch grid");
}

std::vector<std::array<int, 3>> DiscriminatorSpec::conv_arith() const {
    std::vector<std::array<int, 3>> layers;
    for (int i = 0; i < stride2_blocks; ++i) layers.push_back({4, 2, 1});
    layers.push_back({4, 1, 1});  // widening stride-1 conv
    layers.push_back({4, 1, 1});  // 1-channel logit conv
    return layers;
}

int DiscriminatorSpec::patch_grid_for(int size) const {
    int s = size;
    for (const auto& [k, st, p] : conv_arith()) s = kernels::conv_out_dim(s, k, st, p);
    return s;
}

int DiscriminatorSpec::patch_grid() const { return patch_grid_for(input_size); }

// ------------------------------------------------------ PatchDiscriminator

PatchDiscriminator::PatchDiscriminator(const DiscriminatorSpec& spec) : spec_(spec) {
    spec_.validate();
    int cin = spec_.in_channels;
    int f = spec_.base_filters;
    for (int i = 0; i < spec_.stride2_blocks; ++i) {
        const int cout = std::min(f, spec_.max_filters);
        net_.emplace<Conv2d>(cin, cout, 4, 2, 1, i == 0);
        if (i > 0) net_.emplace<InstanceNorm2d>(cout);
        net_.emplace<Activation>(Act::leaky_relu, spec_.leaky_slope);
        cin = cout;
        f *= 2;
    }
    const int cwide = std::min(f, spec_.max_filters);
    net_.emplace<Conv2d>(cin, cwide, 4, 1, 1, false);
    net_.emplace<InstanceNorm2d>(cwide);
    net_.emplace<Activation>(Act::leaky_relu, spec_.leaky_slope);
    net_.emplace<Conv2d>(cwide, 1, 4, 1, 1, true);
}

Tensor PatchDiscriminator::forward(const Tensor& x, Ctx& ctx, bool train, Rng* rng) {
    return net_.forward(x, ctx, train, rng);
}

Tensor PatchDiscriminator::backward(const Tensor& gy, const Ctx& ctx, bool accumulate) {
    return net_.backward(gy, ctx, accumulate);
}

std::vector<Param*> PatchDiscriminator::params(const std::string& prefix) {
    std::vector<Param*> out;
    net_.collect_params(prefix, out);
    return out;
}

// ------------------------------------------------------------ init_weights

void init_weights(const std::vector<Param*>& params, InitScheme scheme, Rng& rng) {
    for (Param* p : params) {
        const std::string& n = p->name;
        const bool is_kernel = n.size() >= 7 && n.compare(n.size() - 7, 7, ".weight") == 0;
        const bool is_gamma = n.size() >= 6 && n.compare(n.size() - 6, 6, ".gamma") == 0;
        if (is_kernel) {
            double stddev = 0.02;
            if (scheme == InitScheme::he) {
                const int fan_in = p->value.c * p->value.h * p->value.w;
                stddev = std::sqrt(2.0 / fan_in);
            }
            for (float& v : p->value.v) v = static_cast<float>(rng.normal(0.0, stddev));
        } else if (is_gamma) {
            p->value.fill(1.0f);
        } else {
            p->value.zero();
        }
        p->grad.zero();
    }
}

}  // namespace tacgap::nn
