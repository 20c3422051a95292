#ifndef TACGAP_NN_MODELS_HPP
#define TACGAP_NN_MODELS_HPP

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "tacgap/nn/layers.hpp"

namespace tacgap::nn {

// U-Net generator: stride-2 conv encoder doubling filters (capped) until the
// feature map is 1x1, mirrored transposed-conv decoder with skip
// concatenations, tanh head.
struct GeneratorSpec {
    int input_size = 256;
    int in_channels = 3;
    int out_channels = 3;
    int base_filters = 64;
    int max_filters = 512;
    float dropout_rate = 0.5f;
    int dropout_blocks = 3;
    float leaky_slope = 0.2f;

    void validate() const;
    int depth() const;  // encoder blocks = log2(input_size)
    std::vector<int> encoder_filters() const;
};

struct UNetCtx {
    std::vector<Ctx> enc, dec;
    Ctx fin;
};

class UNetGenerator {
public:
    explicit UNetGenerator(const GeneratorSpec& spec);

    Tensor forward(const Tensor& x, UNetCtx& ctx, bool train, Rng* rng);
    Tensor backward(const Tensor& gy, const UNetCtx& ctx, bool accumulate);
    std::vector<Param*> params(const std::string& prefix);

    const GeneratorSpec& spec() const { return spec_; }
    // Input channel count of decoder block j (post-concatenation for j >= 1).
    std::vector<int> decoder_input_channels() const { return dec_in_; }
    std::vector<int> decoder_output_channels() const { return dec_out_; }

private:
    GeneratorSpec spec_;
    std::vector<Sequential> enc_;
    std::vector<Sequential> dec_;
    Sequential final_;
    std::vector<int> dec_in_, dec_out_;
};

// PatchGAN discriminator: stride-2 conv blocks (first unnormalized) followed
// by two stride-1 convs, the last producing a 1-channel logit grid.
struct DiscriminatorSpec {
    int input_size = 256;
    int in_channels = 3;
    int stride2_blocks = 4;
    int base_filters = 64;
    int max_filters = 512;
    float leaky_slope = 0.2f;

    void validate() const;
    // (kernel, stride, pad) per conv, in order.
    std::vector<std::array<int, 3>> conv_arith() const;
    int patch_grid() const;  // S for input_size
    int patch_grid_for(int size) const;
};

class PatchDiscriminator {
public:
    explicit PatchDiscriminator(const DiscriminatorSpec& spec);

    Tensor forward(const Tensor& x, Ctx& ctx, bool train, Rng* rng);
    Tensor backward(const Tensor& gy, const Ctx& ctx, bool accumulate);
    std::vector<Param*> params(const std::string& prefix);

    const DiscriminatorSpec& spec() const { return spec_; }

private:
    DiscriminatorSpec spec_;
    Sequential net_;
};

enum class InitScheme { normal002, he };

// Kernels from the chosen scheme, norm scales to 1, offsets and biases to 0.
void init_weights(const std::vector<Param*>& params, InitScheme scheme, Rng& rng);

}  // namespace tacgap::nn

#endif
