#include "tacgap/data/image.hpp"

#include <cmath>

#include "tacgap/errors.hpp"

namespace tacgap::data {

void DepthMap::validate() const {
    if (height < 8 || width < 8)
        throw DataError("depth map must be at least 8x8, got " + std::to_string(height) + "x" +
                        std::to_string(width));
    if (values.size() != static_cast<std::size_t>(height) * width)
        throw DataError("depth map value count does not match dimensions");
    for (float v : values)
        if (!std::isfinite(v) || v < 0.0f) throw DataError("depth map contains invalid values");
}

TactileImage normalize_image(std::span<const float> values, int height, int width, int channels) {
    if (values.size() != static_cast<std::size_t>(height) * width * channels)
        throw DataError("normalize_image: value count does not match dimensions");
    for (float v : values)
        if (!(v >= 0.0f && v <= 255.0f))
            throw DataError("normalize_image: input value outside [0, 255]");
    Tensor out(1, channels, height, width);
    // Input is interleaved (h, w, c); tensors are planar (c, h, w).
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            for (int c = 0; c < channels; ++c)
                out.at(0, c, y, x) =
                    values[(static_cast<std::size_t>(y) * width + x) * channels + c] / 127.5f -
                    1.0f;
    return out;
}

TactileImage normalize_image(const RawImage& raw) {
    std::vector<float> vals(raw.pixels.begin(), raw.pixels.end());
    return normalize_image(vals, raw.height, raw.width, raw.channels);
}

RawImage denormalize_image(const TactileImage& img) {
    for (float v : img.v)
        if (!(v >= -1.0f && v <= 1.0f))
            throw DataError("denormalize_image: value outside [-1, 1]");
    RawImage out;
    out.width = img.w;
    out.height = img.h;
    out.channels = img.c;
    out.pixels.resize(img.size());
    for (int y = 0; y < img.h; ++y)
        for (int x = 0; x < img.w; ++x)
            for (int c = 0; c < img.c; ++c) {
                const double u = (static_cast<double>(img.at(0, c, y, x)) + 1.0) * 127.5;
                double r = std::floor(u + 0.5);  // round half up
                if (r < 0.0) r = 0.0;
                if (r > 255.0) r = 255.0;
                out.pixels[(static_cast<std::size_t>(y) * img.w + x) * img.c + c] =
                    static_cast<std::uint8_t>(r);
            }
    return out;
}

Tensor to_unit_range(const Tensor& img) {
    Tensor out = img;
    for (float& v : out.v) v = (v + 1.0f) * 0.5f;
    return out;
}

Tensor from_unit_range(const Tensor& unit) {
    Tensor out = unit;
    for (float& v : out.v) v = v * 2.0f - 1.0f;
    return out;
}

void write_depth_png(const std::filesystem::path& path, const DepthMap& depth) {
    RawImage16 img;
    img.width = depth.width;
    img.height = depth.height;
    img.pixels.resize(depth.values.size());
    for (std::size_t i = 0; i < depth.values.size(); ++i) {
        const double units = std::floor(depth.values[i] / depth.scale + 0.5);
        if (units < 0.0 || units > 65535.0)
            throw DataError("depth value out of 16-bit range at scale " +
                            std::to_string(depth.scale) + ": " + path.string());
        img.pixels[i] = static_cast<std::uint16_t>(units);
    }
    write_gray16_png(path, img);
}

DepthMap read_depth_png(const std::filesystem::path& path, double scale) {
    RawImage16 img = read_gray16_png(path);
    DepthMap depth;
    depth.width = img.width;
    depth.height = img.height;
    depth.scale = scale;
    depth.values.resize(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        depth.values[i] = static_cast<float>(img.pixels[i] * scale);
    return depth;
}

void SamplePair::validate_alignment() const {
    const bool ok = depth.height == sim.h && depth.width == sim.w && mask.height == sim.h &&
                    mask.width == sim.w && sim.c == 3 &&
                    (!real || (real->h == sim.h && real->w == sim.w && real->c == 3));
    if (!ok) throw DataError("sample '" + id + "': image, depth and mask dimensions disagree");
}

}  // namespace tacgap::data
