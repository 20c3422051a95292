#include "tacgap/eval/metrics.hpp"

#include <cmath>
#include <vector>

#include "tacgap/data/image.hpp"
#include "tacgap/errors.hpp"

namespace tacgap::eval {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;  // (K1 * L)^2, L = 1
constexpr double kC2 = 0.03 * 0.03;

const std::vector<double>& gaussian_window() {
    static const std::vector<double> w = [] {
        std::vector<double> v(kWindow * kWindow);
        const int half = kWindow / 2;
        double sum = 0.0;
        for (int y = 0; y < kWindow; ++y)
            for (int x = 0; x < kWindow; ++x) {
                const double dy = y - half, dx = x - half;
                v[y * kWindow + x] = std::exp(-(dx * dx + dy * dy) / (2.0 * kSigma * kSigma));
                sum += v[y * kWindow + x];
            }
        for (double& e : v) e /= sum;
        return v;
    }();
    return w;
}

void check_pair(const Tensor& a, const Tensor& b, const char* what) {
    if (!a.same_shape(b))
        throw NumericError(std::string(what) + ": shape mismatch " + a.shape_str() + " vs " +
                           b.shape_str());
    if (a.n != 1) throw NumericError(std::string(what) + ": expected single-image tensors");
}

}  // namespace

double ssim(const Tensor& a_in, const Tensor& b_in) {
    check_pair(a_in, b_in, "ssim");
    if (a_in.h < kWindow || a_in.w < kWindow)
        throw NumericError("ssim: images must be at least 11x11");
    const Tensor a = data::to_unit_range(a_in);
    const Tensor b = data::to_unit_range(b_in);
    const auto& win = gaussian_window();
    const int oh = a.h - kWindow + 1, ow = a.w - kWindow + 1;

    double total = 0.0;
    for (int c = 0; c < a.c; ++c) {
        double channel = 0.0;
        for (int y = 0; y < oh; ++y)
            for (int x = 0; x < ow; ++x) {
                double ma = 0.0, mb = 0.0, maa = 0.0, mbb = 0.0, mab = 0.0;
                for (int wy = 0; wy < kWindow; ++wy)
                    for (int wx = 0; wx < kWindow; ++wx) {
                        const double wgt = win[wy * kWindow + wx];
                        const double va = a.at(0, c, y + wy, x + wx);
                        const double vb = b.at(0, c, y + wy, x + wx);
                        ma += wgt * va;
                        mb += wgt * vb;
                        maa += wgt * va * va;
                        mbb += wgt * vb * vb;
                        mab += wgt * va * vb;
                    }
                const double var_a = maa - ma * ma;
                const double var_b = mbb - mb * mb;
                const double cov = mab - ma * mb;
                const double num = (2.0 * ma * mb + kC1) * (2.0 * cov + kC2);
                const double den = (ma * ma + mb * mb + kC1) * (var_a + var_b + kC2);
                channel += num / den;
            }
        total += channel / (static_cast<double>(oh) * ow);
    }
    return total / a.c;
}

double mae_percent(const Tensor& a_in, const Tensor& b_in) {
    check_pair(a_in, b_in, "mae_percent");
    double acc = 0.0;
    for (std::size_t i = 0; i < a_in.size(); ++i) {
        const double ua = (a_in.v[i] + 1.0) * 0.5;
        const double ub = (b_in.v[i] + 1.0) * 0.5;
        acc += std::abs(ua - ub);
    }
    return acc / static_cast<double>(a_in.size()) * 100.0;
}

Tensor difference_map(const Tensor& a, const Tensor& b) {
    check_pair(a, b, "difference_map");
    Tensor map(1, 1, a.h, a.w);
    for (int y = 0; y < a.h; ++y)
        for (int x = 0; x < a.w; ++x) {
            double d = 0.0;
            for (int c = 0; c < a.c; ++c) {
                const double ua = (a.at(0, c, y, x) + 1.0) * 0.5;
                const double ub = (b.at(0, c, y, x) + 1.0) * 0.5;
                d += std::abs(ua - ub);
            }
            map.at(0, 0, y, x) = static_cast<float>(1.0 - d / a.c);
        }
    return map;
}

namespace {
double masked_mean_diff(const Tensor& a, const Tensor& b, const mask::ContactMask& m,
                        bool background, const char* what) {
    check_pair(a, b, what);
    if (m.height != a.h || m.width != a.w)
        throw NumericError(std::string(what) + ": mask dimensions do not match the images");
    double acc = 0.0;
    std::size_t count = 0;
    for (int y = 0; y < a.h; ++y)
        for (int x = 0; x < a.w; ++x) {
            const bool in_contact = m.at(y, x) != 0;
            if (in_contact == background) continue;
            for (int c = 0; c < a.c; ++c) {
                const double ua = (a.at(0, c, y, x) + 1.0) * 0.5;
                const double ub = (b.at(0, c, y, x) + 1.0) * 0.5;
                acc += std::abs(ua - ub);
            }
            ++count;
        }
    if (count == 0)
        throw NumericError(std::string(what) + ": mask leaves no pixels to measure");
    return acc / (static_cast<double>(count) * a.c);
}
}  // namespace

double texture_leak(const Tensor& adapted, const Tensor& sim, const mask::ContactMask& m) {
    return masked_mean_diff(adapted, sim, m, true, "texture_leak");
}

double contact_change(const Tensor& a, const Tensor& b, const mask::ContactMask& m) {
    return masked_mean_diff(a, b, m, false, "contact_change");
}

}  // namespace tacgap::eval
