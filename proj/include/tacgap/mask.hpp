#ifndef TACGAP_MASK_HPP
#define TACGAP_MASK_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include "tacgap/tensor.hpp"

namespace tacgap::data {
struct DepthMap;
}

namespace tacgap::mask {

// Binary in-contact field: 1 where the elastomer is deformed by the object.
struct ContactMask {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> values;  // strictly {0, 1}

    std::uint8_t at(int y, int x) const {
        return values[static_cast<std::size_t>(y) * width + x];
    }
    std::size_t size() const { return values.size(); }
    // (1, 1, h, w) float tensor for loss evaluation.
    Tensor to_tensor() const;
    void validate() const;
};

// m_s(p) = 1 iff depth(p) < elastomer_depth (strict: pixels exactly at the
// elastomer surface are background).
ContactMask mask_from_depth(const data::DepthMap& depth, double elastomer_depth);

// The (1 - m_s) background weights of the mask loss.
Tensor background_selector(const ContactMask& mask);

// Fraction of in-contact pixels.
double mask_coverage(const ContactMask& mask);

// 8-bit {0, 255} PNG for inspection.
void write_mask_png(const std::filesystem::path& path, const ContactMask& mask);

}  // namespace tacgap::mask

#endif
