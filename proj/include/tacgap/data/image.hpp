#ifndef TACGAP_DATA_IMAGE_HPP
#define TACGAP_DATA_IMAGE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tacgap/data/png_io.hpp"
#include "tacgap/mask.hpp"
#include "tacgap/tensor.hpp"

namespace tacgap::data {

// Close-up depth field at the sensor, meters from the camera. Stored on disk
// as 16-bit PNG with `scale` meters per unit; all synthesized values are
// snapped to that grid so disk round-trips are exact.
struct DepthMap {
    int height = 0;
    int width = 0;
    std::vector<float> values;
    double scale = 1e-7;

    float at(int y, int x) const { return values[static_cast<std::size_t>(y) * width + x]; }
    float& at(int y, int x) { return values[static_cast<std::size_t>(y) * width + x]; }
    void validate() const;
};

// Tactile images are (1, 3, h, w) tensors in [-1, 1].
using TactileImage = Tensor;

// Pixel-level normalization of 0..255 data into [-1, 1].
TactileImage normalize_image(const RawImage& raw);
TactileImage normalize_image(std::span<const float> values, int height, int width, int channels);
// Exact inverse up to rounding (round half up).
RawImage denormalize_image(const TactileImage& img);

// Map between [-1, 1] tensors and [0, 1] unit-interval tensors (metrics run
// in unit space).
Tensor to_unit_range(const Tensor& img);
Tensor from_unit_range(const Tensor& unit);

void write_depth_png(const std::filesystem::path& path, const DepthMap& depth);
DepthMap read_depth_png(const std::filesystem::path& path, double scale);

struct SampleMeta {
    int grid_pos = 0;   // position index within the tap grid
    int tap_index = 0;  // depth index of the tap
};

// Aligned record: simulated image, optional real image, depth, mask, label.
struct SamplePair {
    std::string id;
    DepthMap depth;
    TactileImage sim;
    std::optional<TactileImage> real;
    mask::ContactMask mask;
    int label = 0;
    SampleMeta meta;

    bool paired() const { return real.has_value(); }
    void validate_alignment() const;
};

}  // namespace tacgap::data

#endif
