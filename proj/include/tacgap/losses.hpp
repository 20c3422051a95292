#ifndef TACGAP_LOSSES_HPP
#define TACGAP_LOSSES_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "tacgap/errors.hpp"
#include "tacgap/tensor.hpp"

// Loss terms of the texture generation objective. All L1-style terms are
// per-element means, so values are comparable across resolutions and batch
// sizes. Everything is templated on the scalar type: float in training,
// double where tests compare against finite differences.

namespace tacgap::losses {

enum class AdvMode { log_loss, least_squares };

AdvMode adv_mode_from_string(const std::string& s);
std::string to_string(AdvMode mode);

template <typename T>
T softplus(T x) {
    return std::log1p(std::exp(-std::abs(x))) + (x > T(0) ? x : T(0));
}

template <typename T>
T sigmoid(T x) {
    return T(1) / (T(1) + std::exp(-x));
}

template <typename T>
struct AdvPair {
    T loss_d, loss_g;
};

// Patch-grid adversarial loss for one (real, fake) logit pair. Log mode is
// the non-saturating realization of the minimax objective; least-squares is
// the default training mode.
template <typename T>
AdvPair<T> adversarial_loss(std::span<const T> d_real, std::span<const T> d_fake, AdvMode mode) {
    T ld = 0, lg = 0;
    if (mode == AdvMode::log_loss) {
        for (T z : d_real) ld += softplus(-z);
        T lf = 0;
        for (T z : d_fake) {
            lf += softplus(z);
            lg += softplus(-z);
        }
        ld = ld / T(d_real.size()) + lf / T(d_fake.size());
        lg /= T(d_fake.size());
    } else {
        for (T z : d_real) ld += (z - T(1)) * (z - T(1));
        T lf = 0;
        for (T z : d_fake) {
            lf += z * z;
            lg += (z - T(1)) * (z - T(1));
        }
        ld = ld / T(d_real.size()) + lf / T(d_fake.size());
        lg /= T(d_fake.size());
    }
    return {ld, lg};
}

// Gradients of loss_d w.r.t. both logit grids and of loss_g w.r.t. the fake
// logits. Any output may be null.
template <typename T>
void adversarial_loss_grads(std::span<const T> d_real, std::span<const T> d_fake, AdvMode mode,
                            T* g_real_d, T* g_fake_d, T* g_fake_g) {
    const T nr = T(d_real.size()), nf = T(d_fake.size());
    if (mode == AdvMode::log_loss) {
        if (g_real_d)
            for (std::size_t i = 0; i < d_real.size(); ++i)
                g_real_d[i] = (sigmoid(d_real[i]) - T(1)) / nr;
        for (std::size_t i = 0; i < d_fake.size(); ++i) {
            const T s = sigmoid(d_fake[i]);
            if (g_fake_d) g_fake_d[i] = s / nf;
            if (g_fake_g) g_fake_g[i] = (s - T(1)) / nf;
        }
    } else {
        if (g_real_d)
            for (std::size_t i = 0; i < d_real.size(); ++i)
                g_real_d[i] = T(2) * (d_real[i] - T(1)) / nr;
        for (std::size_t i = 0; i < d_fake.size(); ++i) {
            if (g_fake_d) g_fake_d[i] = T(2) * d_fake[i] / nf;
            if (g_fake_g) g_fake_g[i] = T(2) * (d_fake[i] - T(1)) / nf;
        }
    }
}

template <typename T>
T l1_mean(std::span<const T> a, std::span<const T> b) {
    T acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return acc / T(a.size());
}

// d(mean|a - b|)/da, scaled; accumulates into ga.
template <typename T>
void l1_mean_grad(std::span<const T> a, std::span<const T> b, T scale, T* ga) {
    const T s = scale / T(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const T d = a[i] - b[i];
        ga[i] += d > T(0) ? s : (d < T(0) ? -s : T(0));
    }
}

// L_cycle: both reconstruction directions.
template <typename T>
T cycle_loss(std::span<const T> x_s, std::span<const T> cycled_s, std::span<const T> x_r,
             std::span<const T> cycled_r) {
    return l1_mean(cycled_s, x_s) + l1_mean(cycled_r, x_r);
}

// L_identity: generators applied to images already in their output domain.
template <typename T>
T identity_loss(std::span<const T> x_s, std::span<const T> g_rs_of_xs, std::span<const T> x_r,
                std::span<const T> g_sr_of_xr) {
    return l1_mean(g_rs_of_xs, x_s) + l1_mean(g_sr_of_xr, x_r);
}

// L_mask: background-constrained reconstruction of the adapted image.
// mask holds one value per pixel (plane of size `plane`), broadcast over
// `channels`; contact pixels (mask = 1) contribute zero. With alpha = 1 the
// real image is not consulted and `x_r` may be empty.
template <typename T>
T mask_loss(std::span<const T> adapted, std::span<const T> x_s, std::span<const T> x_r,
            std::span<const T> mask, int channels, T alpha) {
    if (alpha < T(0) || alpha > T(1)) throw ConfigError("mask_loss: alpha must be in [0, 1]");
    const bool need_real = alpha < T(1);
    if (need_real && x_r.size() != adapted.size())
        throw ConfigError("mask_loss: alpha < 1 requires a paired real image");
    const std::size_t plane = mask.size();
    T acc = 0;
    for (int c = 0; c < channels; ++c) {
        const std::size_t off = static_cast<std::size_t>(c) * plane;
        for (std::size_t p = 0; p < plane; ++p) {
            const T bg = T(1) - mask[p];
            if (bg == T(0)) continue;
            T term = alpha * std::abs(adapted[off + p] - x_s[off + p]);
            if (need_real) term += (T(1) - alpha) * std::abs(adapted[off + p] - x_r[off + p]);
            acc += term * bg;
        }
    }
    return acc / T(adapted.size());
}

// d(mask_loss)/d(adapted), scaled; accumulates into g.
template <typename T>
void mask_loss_grad(std::span<const T> adapted, std::span<const T> x_s, std::span<const T> x_r,
                    std::span<const T> mask, int channels, T alpha, T scale, T* g) {
    if (alpha < T(0) || alpha > T(1)) throw ConfigError("mask_loss: alpha must be in [0, 1]");
    const bool need_real = alpha < T(1);
    if (need_real && x_r.size() != adapted.size())
        throw ConfigError("mask_loss: alpha < 1 requires a paired real image");
    const std::size_t plane = mask.size();
    const T s = scale / T(adapted.size());
    auto sgn = [](T d) { return d > T(0) ? T(1) : (d < T(0) ? T(-1) : T(0)); };
    for (int c = 0; c < channels; ++c) {
        const std::size_t off = static_cast<std::size_t>(c) * plane;
        for (std::size_t p = 0; p < plane; ++p) {
            const T bg = T(1) - mask[p];
            if (bg == T(0)) continue;
            T d = alpha * sgn(adapted[off + p] - x_s[off + p]);
            if (need_real) d += (T(1) - alpha) * sgn(adapted[off + p] - x_r[off + p]);
            g[off + p] += s * bg * d;
        }
    }
}

struct LossWeights {
    double gan = 1.0;
    double cycle = 10.0;
    double identity = 5.0;
    double mask = 10.0;
    double alpha = 1.0;  // 1 = "Mask Sim", 0 = "Mask Real", 0.5 = "Mask Combined"

    void validate() const {
        if (gan < 0 || cycle < 0 || identity < 0 || mask < 0)
            throw ConfigError("loss weights must be nonnegative");
        if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must be in [0, 1]");
    }
};

struct LossReport {
    double gan_g = 0.0;
    double gan_d = 0.0;
    double cycle = 0.0;
    double identity = 0.0;
    double mask = 0.0;
    double total = 0.0;

    bool all_finite() const {
        return std::isfinite(gan_g) && std::isfinite(gan_d) && std::isfinite(cycle) &&
               std::isfinite(identity) && std::isfinite(mask) && std::isfinite(total);
    }
};

struct Objective {
    double generator_total;
    double discriminator_total;
};

inline Objective total_objective(const LossReport& r, const LossWeights& w) {
    return {w.gan * r.gan_g + w.cycle * r.cycle + w.identity * r.identity + w.mask * r.mask,
            w.gan * r.gan_d};
}

// Tensor-level conveniences used by the trainer (float path).

inline std::span<const float> flat(const Tensor& t) { return {t.data(), t.size()}; }

inline void check_same_shape(const Tensor& a, const Tensor& b, const char* what) {
    if (!a.same_shape(b))
        throw NumericError(std::string(what) + ": shape mismatch " + a.shape_str() + " vs " +
                           b.shape_str());
}

inline double cycle_loss_t(const Tensor& x_s, const Tensor& cycled_s, const Tensor& x_r,
                           const Tensor& cycled_r) {
    check_same_shape(x_s, cycled_s, "cycle_loss");
    check_same_shape(x_r, cycled_r, "cycle_loss");
    return cycle_loss<float>(flat(x_s), flat(cycled_s), flat(x_r), flat(cycled_r));
}

inline double identity_loss_t(const Tensor& x_s, const Tensor& g_rs_of_xs, const Tensor& x_r,
                              const Tensor& g_sr_of_xr) {
    check_same_shape(x_s, g_rs_of_xs, "identity_loss");
    check_same_shape(x_r, g_sr_of_xr, "identity_loss");
    return identity_loss<float>(flat(x_s), flat(g_rs_of_xs), flat(x_r), flat(g_sr_of_xr));
}

// Batched mask loss; mask is (n, 1, h, w), images (n, c, h, w).
double mask_loss_t(const Tensor& adapted, const Tensor& x_s, const Tensor* x_r, const Tensor& mask,
                   double alpha);
void mask_loss_grad_t(const Tensor& adapted, const Tensor& x_s, const Tensor* x_r,
                      const Tensor& mask, double alpha, float scale, Tensor& g);

}  // namespace tacgap::losses

#endif
