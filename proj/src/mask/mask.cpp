#include "tacgap/mask.hpp"

#include <cmath>

#include "tacgap/data/image.hpp"
#include "tacgap/data/png_io.hpp"
#include "tacgap/errors.hpp"

namespace tacgap::mask {

void ContactMask::validate() const {
    if (values.size() != static_cast<std::size_t>(height) * width)
        throw DataError("contact mask value count does not match dimensions");
    for (std::uint8_t v : values)
        if (v > 1) throw DataError("contact mask must be strictly binary");
}

Tensor ContactMask::to_tensor() const {
    Tensor t(1, 1, height, width);
    for (std::size_t i = 0; i < values.size(); ++i) t.v[i] = static_cast<float>(values[i]);
    return t;
}

ContactMask mask_from_depth(const data::DepthMap& depth, double elastomer_depth) {
    if (!(elastomer_depth > 0.0)) throw ConfigError("elastomer_depth must be > 0");
    for (float v : depth.values)
        if (!std::isfinite(v)) throw DataError("mask_from_depth: non-finite depth value");
    ContactMask m;
    m.height = depth.height;
    m.width = depth.width;
    m.values.resize(depth.values.size());
    for (std::size_t i = 0; i < depth.values.size(); ++i)
        m.values[i] = static_cast<double>(depth.values[i]) < elastomer_depth ? 1 : 0;
    return m;
}

Tensor background_selector(const ContactMask& mask) {
    Tensor t(1, 1, mask.height, mask.width);
    for (std::size_t i = 0; i < mask.values.size(); ++i)
        t.v[i] = 1.0f - static_cast<float>(mask.values[i]);
    return t;
}

double mask_coverage(const ContactMask& mask) {
    if (mask.values.empty()) return 0.0;
    double acc = 0.0;
    for (std::uint8_t v : mask.values) acc += v;
    return acc / static_cast<double>(mask.values.size());
}

void write_mask_png(const std::filesystem::path& path, const ContactMask& mask) {
    std::vector<std::uint8_t> px(mask.values.size());
    for (std::size_t i = 0; i < mask.values.size(); ++i) px[i] = mask.values[i] ? 255 : 0;
    data::write_gray8_png(path, mask.width, mask.height, px);
}

}  // namespace tacgap::mask
