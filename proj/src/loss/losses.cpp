#include "tacgap/losses.hpp"

namespace tacgap::losses {

AdvMode adv_mode_from_string(const std::string& s) {
    if (s == "log") return AdvMode::log_loss;
    if (s == "least-squares" || s == "lsgan") return AdvMode::least_squares;
    throw ConfigError("adversarial mode must be 'log' or 'least-squares', got '" + s + "'");
}

std::string to_string(AdvMode mode) {
    return mode == AdvMode::log_loss ? "log" : "least-squares";
}

namespace {
void check_mask_shapes(const Tensor& adapted, const Tensor& x_s, const Tensor* x_r,
                       const Tensor& mask) {
    check_same_shape(adapted, x_s, "mask_loss");
    if (x_r) check_same_shape(adapted, *x_r, "mask_loss");
    if (mask.n != adapted.n || mask.c != 1 || mask.h != adapted.h || mask.w != adapted.w)
        throw NumericError("mask_loss: mask " + mask.shape_str() + " does not match images " +
                           adapted.shape_str());
}
}  // namespace

double mask_loss_t(const Tensor& adapted, const Tensor& x_s, const Tensor* x_r, const Tensor& mask,
                   double alpha) {
    check_mask_shapes(adapted, x_s, x_r, mask);
    const std::size_t img = static_cast<std::size_t>(adapted.c) * adapted.plane();
    const std::size_t pl = mask.plane();
    double acc = 0.0;
    for (int b = 0; b < adapted.n; ++b) {
        std::span<const float> a{adapted.data() + b * img, img};
        std::span<const float> s{x_s.data() + b * img, img};
        std::span<const float> r =
            x_r ? std::span<const float>{x_r->data() + b * img, img} : std::span<const float>{};
        std::span<const float> m{mask.data() + b * pl, pl};
        acc += mask_loss<float>(a, s, r, m, adapted.c, static_cast<float>(alpha));
    }
    return acc / adapted.n;
}

void mask_loss_grad_t(const Tensor& adapted, const Tensor& x_s, const Tensor* x_r,
                      const Tensor& mask, double alpha, float scale, Tensor& g) {
    check_mask_shapes(adapted, x_s, x_r, mask);
    const std::size_t img = static_cast<std::size_t>(adapted.c) * adapted.plane();
    const std::size_t pl = mask.plane();
    const float per_sample = scale / adapted.n;
    for (int b = 0; b < adapted.n; ++b) {
        std::span<const float> a{adapted.data() + b * img, img};
        std::span<const float> s{x_s.data() + b * img, img};
        std::span<const float> r =
            x_r ? std::span<const float>{x_r->data() + b * img, img} : std::span<const float>{};
        std::span<const float> m{mask.data() + b * pl, pl};
        mask_loss_grad<float>(a, s, r, m, adapted.c, static_cast<float>(alpha), per_sample,
                              g.data() + b * img);
    }
}

}  // namespace tacgap::losses
