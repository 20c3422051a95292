#include "tacgap/data/augment.hpp"

#include <cmath>

#include "tacgap/errors.hpp"

namespace tacgap::data {

namespace {
constexpr double kPi = 3.14159265358979323846;

struct Transform {
    double cos_t, sin_t;
    double off_x, off_y;     // crop offset in upscaled coordinates
    double center;           // rotation center of the upscaled frame
    double src_per_up;       // upscaled -> source coordinate ratio
    bool flip;
    int crop, src_h, src_w;

    // Source-pixel coordinates sampled by output pixel (y, x).
    void map(int y, int x, double& sy, double& sx) const {
        const double ox = flip ? (crop - 1 - x) : x;
        const double qx = ox + off_x - center;
        const double qy = y + off_y - center;
        const double rx = cos_t * qx + sin_t * qy + center;
        const double ry = -sin_t * qx + cos_t * qy + center;
        sx = rx * src_per_up;
        sy = ry * src_per_up;
    }
};

double sample_bilinear(const float* img, int h, int w, double sy, double sx) {
    sx = std::clamp(sx, 0.0, static_cast<double>(w - 1));
    sy = std::clamp(sy, 0.0, static_cast<double>(h - 1));
    const int x0 = static_cast<int>(sx), y0 = static_cast<int>(sy);
    const int x1 = std::min(x0 + 1, w - 1), y1 = std::min(y0 + 1, h - 1);
    const double fx = sx - x0, fy = sy - y0;
    const double a = img[static_cast<std::size_t>(y0) * w + x0];
    const double b = img[static_cast<std::size_t>(y0) * w + x1];
    const double c = img[static_cast<std::size_t>(y1) * w + x0];
    const double d = img[static_cast<std::size_t>(y1) * w + x1];
    return a * (1 - fx) * (1 - fy) + b * fx * (1 - fy) + c * (1 - fx) * fy + d * fx * fy;
}

Tensor warp_image(const Tensor& img, const Transform& t) {
    Tensor out(1, img.c, t.crop, t.crop);
    for (int c = 0; c < img.c; ++c) {
        const float* plane = &img.v[static_cast<std::size_t>(c) * img.h * img.w];
        for (int y = 0; y < t.crop; ++y)
            for (int x = 0; x < t.crop; ++x) {
                double sy, sx;
                t.map(y, x, sy, sx);
                out.at(0, c, y, x) =
                    static_cast<float>(sample_bilinear(plane, img.h, img.w, sy, sx));
            }
    }
    return out;
}
}  // namespace

void AugmentationConfig::validate(int nominal_size) const {
    if (upscale < 1.0) throw ConfigError("augmentation: upscale must be >= 1");
    if (flip_prob < 0.0 || flip_prob > 1.0)
        throw ConfigError("augmentation: flip_prob must be in [0, 1]");
    if (max_rotation_deg < 0.0) throw ConfigError("augmentation: max_rotation_deg must be >= 0");
    const int crop = crop_size > 0 ? crop_size : nominal_size;
    const int upscaled = static_cast<int>(std::floor(nominal_size * upscale + 0.5));
    if (crop > upscaled)
        throw ConfigError("augmentation: crop size " + std::to_string(crop) +
                          " exceeds upscaled size " + std::to_string(upscaled));
}

SamplePair augment_pair(const SamplePair& pair, const AugmentationConfig& cfg, Rng& rng) {
    if (pair.sim.h != pair.sim.w)
        throw ConfigError("augmentation expects square images, got " + pair.sim.shape_str());
    pair.validate_alignment();
    const int src = pair.sim.h;
    cfg.validate(src);
    const int crop = cfg.crop_size > 0 ? cfg.crop_size : src;
    const int upscaled = static_cast<int>(std::floor(src * cfg.upscale + 0.5));

    Transform t;
    const double angle = rng.uniform(-cfg.max_rotation_deg, cfg.max_rotation_deg) * kPi / 180.0;
    t.cos_t = std::cos(angle);
    t.sin_t = std::sin(angle);
    t.flip = rng.bernoulli(cfg.flip_prob);
    const int slack = upscaled - crop;
    t.off_y = slack > 0 ? static_cast<double>(rng.uniform_u32(slack + 1)) : 0.0;
    t.off_x = slack > 0 ? static_cast<double>(rng.uniform_u32(slack + 1)) : 0.0;
    t.center = (upscaled - 1) / 2.0;
    t.src_per_up = upscaled > 1 ? static_cast<double>(src - 1) / (upscaled - 1) : 1.0;
    t.crop = crop;
    t.src_h = t.src_w = src;

    SamplePair out;
    out.id = pair.id;
    out.label = pair.label;
    out.meta = pair.meta;
    out.sim = warp_image(pair.sim, t);
    if (pair.real) out.real = warp_image(*pair.real, t);

    out.depth.height = crop;
    out.depth.width = crop;
    out.depth.scale = pair.depth.scale;
    out.depth.values.resize(static_cast<std::size_t>(crop) * crop);
    out.mask.height = crop;
    out.mask.width = crop;
    out.mask.values.resize(out.depth.values.size());
    for (int y = 0; y < crop; ++y)
        for (int x = 0; x < crop; ++x) {
            double sy, sx;
            t.map(y, x, sy, sx);
            out.depth.at(y, x) = static_cast<float>(
                sample_bilinear(pair.depth.values.data(), src, src, sy, sx));
            // nearest neighbor keeps the mask binary
            const int ny = std::clamp(static_cast<int>(std::floor(sy + 0.5)), 0, src - 1);
            const int nx = std::clamp(static_cast<int>(std::floor(sx + 0.5)), 0, src - 1);
            out.mask.values[static_cast<std::size_t>(y) * crop + x] = pair.mask.at(ny, nx);
        }
    return out;
}

}  // namespace tacgap::data
