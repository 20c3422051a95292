#ifndef TACGAP_EVAL_METRICS_HPP
#define TACGAP_EVAL_METRICS_HPP

#include "tacgap/mask.hpp"
#include "tacgap/tensor.hpp"

namespace tacgap::eval {

// Structural similarity between two [-1,1] images. Values are mapped to
// [0,1] first; per channel, 11x11 Gaussian window sigma 1.5, K1 = 0.01,
// K2 = 0.03, dynamic range 1; windows fully inside the image, averaged over
// channels and positions.
double ssim(const Tensor& a, const Tensor& b);

// Mean absolute error in percent of the [0,1] dynamic range.
double mae_percent(const Tensor& a, const Tensor& b);

// Channel-averaged |a-b| in unit space, inverted (white = zero difference);
// (1,1,h,w) tensor in [0,1] ready for 8-bit export.
Tensor difference_map(const Tensor& a, const Tensor& b);

// Mean |adapted - sim| (unit space) over background pixels only. Errors on an
// all-ones mask (no background to measure).
double texture_leak(const Tensor& adapted, const Tensor& sim, const mask::ContactMask& m);

// Mean |a - b| (unit space) over in-contact pixels; the counterpart used to
// normalize texture_leak.
double contact_change(const Tensor& a, const Tensor& b, const mask::ContactMask& m);

}  // namespace tacgap::eval

#endif
