#ifndef TACGAP_DATA_AUGMENT_HPP
#define TACGAP_DATA_AUGMENT_HPP

#include "tacgap/data/image.hpp"
#include "tacgap/rng.hpp"

namespace tacgap::data {

struct AugmentationConfig {
    double upscale = 1.12;        // resolution increase before the crop
    int crop_size = 0;            // 0 = nominal input size
    double max_rotation_deg = 5;  // rotation uniform in +-max
    double flip_prob = 0.5;
    std::uint64_t seed = 0;       // base seed; the trainer forks per sample

    void validate(int nominal_size) const;
};

// One geometric transform (upscale, rotate, crop, flip), drawn from rng and
// applied identically to sim, real, depth and mask so the pairing survives.
// Images and depth resample bilinearly, the mask nearest-neighbor.
SamplePair augment_pair(const SamplePair& pair, const AugmentationConfig& cfg, Rng& rng);

}  // namespace tacgap::data

#endif
