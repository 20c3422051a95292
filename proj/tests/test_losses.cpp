#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <span>
#include <vector>

#include "tacgap/losses.hpp"
#include "tacgap/rng.hpp"

using namespace tacgap;
using namespace tacgap::losses;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng, double lo = -2.0, double hi = 2.0) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

// Scalar oracle: recomputes the adversarial loss cell by cell, straight from
// the written formulas, independent of the implementation.
std::pair<double, double> adv_oracle(const std::vector<double>& zr, const std::vector<double>& zf,
                                     AdvMode mode) {
    double ld = 0.0, lg = 0.0;
    if (mode == AdvMode::log_loss) {
        double a = 0.0;
        for (double z : zr) a += -std::log(1.0 / (1.0 + std::exp(-z)));
        double b = 0.0;
        for (double z : zf) b += -std::log(1.0 - 1.0 / (1.0 + std::exp(-z)));
        for (double z : zf) lg += -std::log(1.0 / (1.0 + std::exp(-z)));
        ld = a / zr.size() + b / zf.size();
        lg /= zf.size();
    } else {
        double a = 0.0;
        for (double z : zr) a += (z - 1.0) * (z - 1.0);
        double b = 0.0;
        for (double z : zf) b += z * z;
        for (double z : zf) lg += (z - 1.0) * (z - 1.0);
        ld = a / zr.size() + b / zf.size();
        lg /= zf.size();
    }
    return {ld, lg};
}

}  // namespace

TEST_CASE("adversarial loss matches the scalar oracle on random grids") {
    Rng rng(21);
    for (AdvMode mode : {AdvMode::log_loss, AdvMode::least_squares}) {
        for (int rep = 0; rep < 100; ++rep) {
            const auto zr = random_vec(4, rng, -3.0, 3.0);
            const auto zf = random_vec(4, rng, -3.0, 3.0);
            const auto got = adversarial_loss<double>(zr, zf, mode);
            const auto [ld, lg] = adv_oracle(zr, zf, mode);
            CHECK(got.loss_d == doctest::Approx(ld).epsilon(1e-9));
            CHECK(got.loss_g == doctest::Approx(lg).epsilon(1e-9));
        }
    }
}

TEST_CASE("adversarial limits") {
    // perfect discriminator in log mode: loss_d -> 0
    std::vector<double> zr = {30.0, 40.0};
    std::vector<double> zf = {-30.0, -35.0};
    const auto log_pair = adversarial_loss<double>(zr, zf, AdvMode::log_loss);
    CHECK(log_pair.loss_d == doctest::Approx(0.0).epsilon(1e-9));

    // least squares: d_fake == 1 makes loss_g zero
    std::vector<double> ones = {1.0, 1.0, 1.0};
    const auto ls = adversarial_loss<double>(ones, ones, AdvMode::least_squares);
    CHECK(ls.loss_g == doctest::Approx(0.0));
}

TEST_CASE("adversarial gradients vs central differences (wide precision)") {
    Rng rng(22);
    const std::size_t n = 4 * 4 * 3;
    for (AdvMode mode : {AdvMode::log_loss, AdvMode::least_squares}) {
        auto zr = random_vec(n, rng, -2.0, 2.0);
        auto zf = random_vec(n, rng, -2.0, 2.0);
        std::vector<double> g_real_d(n), g_fake_d(n), g_fake_g(n);
        adversarial_loss_grads<double>(zr, zf, mode, g_real_d.data(), g_fake_d.data(),
                                       g_fake_g.data());
        const double eps = 1e-4;
        for (std::size_t i = 0; i < n; i += 7) {
            auto at = [&](std::vector<double>& v, double delta, auto which) {
                v[i] += delta;
                const auto r = adversarial_loss<double>(zr, zf, mode);
                v[i] -= delta;
                return which(r);
            };
            const double fd_rd = (at(zr, eps, [](auto r) { return r.loss_d; }) -
                                  at(zr, -eps, [](auto r) { return r.loss_d; })) /
                                 (2 * eps);
            const double fd_fd = (at(zf, eps, [](auto r) { return r.loss_d; }) -
                                  at(zf, -eps, [](auto r) { return r.loss_d; })) /
                                 (2 * eps);
            const double fd_fg = (at(zf, eps, [](auto r) { return r.loss_g; }) -
                                  at(zf, -eps, [](auto r) { return r.loss_g; })) /
                                 (2 * eps);
            CHECK(std::abs(fd_rd - g_real_d[i]) < 1e-3 * std::max(1.0, std::abs(fd_rd)));
            CHECK(std::abs(fd_fd - g_fake_d[i]) < 1e-3 * std::max(1.0, std::abs(fd_fd)));
            CHECK(std::abs(fd_fg - g_fake_g[i]) < 1e-3 * std::max(1.0, std::abs(fd_fg)));
        }
    }
}

TEST_CASE("cycle loss examples and symmetry") {
    const std::vector<double> zeros(12, 0.0), ones(12, 1.0);
    // identity generators
    CHECK(cycle_loss<double>(zeros, zeros, ones, ones) == doctest::Approx(0.0));
    // x_s = 0, cycled = 1, real side exact
    CHECK(cycle_loss<double>(zeros, ones, ones, ones) == doctest::Approx(1.0));
    Rng rng(23);
    const auto a = random_vec(12, rng), b = random_vec(12, rng);
    const auto c = random_vec(12, rng), d = random_vec(12, rng);
    CHECK(cycle_loss<double>(a, b, c, d) == doctest::Approx(cycle_loss<double>(c, d, a, b)));
}

TEST_CASE("identity loss examples") {
    const std::vector<double> x(9, 0.25);
    CHECK(identity_loss<double>(x, x, x, x) == doctest::Approx(0.0));
    std::vector<double> shifted(9, 0.25 + 0.1);
    CHECK(identity_loss<double>(x, shifted, x, shifted) == doctest::Approx(0.2));
    Rng rng(24);
    const auto a = random_vec(9, rng), b = random_vec(9, rng);
    CHECK(identity_loss<double>(a, b, a, b) >= 0.0);
}

TEST_CASE("mask loss spec example and edge cases") {
    // single-channel 2x2: adapted=1, x_s=0, x_r=0.5, mask=0, alpha=0.5 -> 0.75
    const std::vector<double> adapted(4, 1.0), xs(4, 0.0), xr(4, 0.5), mask0(4, 0.0);
    CHECK(mask_loss<double>(adapted, xs, xr, mask0, 1, 0.5) == doctest::Approx(0.75));

    // adapted == x_s, alpha = 1: zero for any mask
    const std::vector<double> m_half = {1.0, 0.0, 1.0, 0.0};
    CHECK(mask_loss<double>(xs, xs, {}, m_half, 1, 1.0) == doctest::Approx(0.0));

    // all-ones mask: zero regardless of images
    const std::vector<double> mask1(4, 1.0);
    CHECK(mask_loss<double>(adapted, xs, xr, mask1, 1, 0.3) == doctest::Approx(0.0));

    CHECK_THROWS_AS(mask_loss<double>(adapted, xs, xr, mask0, 1, 1.5), ConfigError);
    CHECK_THROWS_AS(mask_loss<double>(adapted, xs, {}, mask0, 1, 0.5), ConfigError);
}

TEST_CASE("mask loss oracle on random multichannel inputs") {
    Rng rng(25);
    for (int rep = 0; rep < 100; ++rep) {
        const int c = 2, plane = 4 * 4;
        const auto adapted = random_vec(c * plane, rng);
        const auto xs = random_vec(c * plane, rng);
        const auto xr = random_vec(c * plane, rng);
        std::vector<double> mask(plane);
        for (double& m : mask) m = rng.bernoulli(0.4) ? 1.0 : 0.0;
        const double alpha = rng.uniform();

        double expect = 0.0;
        for (int ch = 0; ch < c; ++ch)
            for (int p = 0; p < plane; ++p) {
                const double term = alpha * std::abs(adapted[ch * plane + p] - xs[ch * plane + p]) +
                                    (1 - alpha) * std::abs(adapted[ch * plane + p] - xr[ch * plane + p]);
                expect += term * (1.0 - mask[p]);
            }
        expect /= c * plane;
        const double got = mask_loss<double>(adapted, xs, xr, mask, c, alpha);
        CHECK(got == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("mask loss gradient vs central differences") {
    Rng rng(26);
    const int c = 3, plane = 16;
    auto adapted = random_vec(c * plane, rng);
    const auto xs = random_vec(c * plane, rng);
    const auto xr = random_vec(c * plane, rng);
    std::vector<double> mask(plane);
    for (double& m : mask) m = rng.bernoulli(0.5) ? 1.0 : 0.0;
    const double alpha = 0.4;

    std::vector<double> g(c * plane, 0.0);
    mask_loss_grad<double>(adapted, xs, xr, mask, c, alpha, 1.0, g.data());
    const double eps = 1e-4;
    for (std::size_t i = 0; i < adapted.size(); i += 5) {
        adapted[i] += eps;
        const double up = mask_loss<double>(adapted, xs, xr, mask, c, alpha);
        adapted[i] -= 2 * eps;
        const double dn = mask_loss<double>(adapted, xs, xr, mask, c, alpha);
        adapted[i] += eps;
        const double fd = (up - dn) / (2 * eps);
        CHECK(std::abs(fd - g[i]) < 1e-3 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("mask loss locality: contact pixels never contribute") {
    Rng rng(27);
    const int c = 3, plane = 25;
    auto adapted = random_vec(c * plane, rng);
    const auto xs = random_vec(c * plane, rng);
    std::vector<double> mask(plane);
    for (double& m : mask) m = rng.bernoulli(0.5) ? 1.0 : 0.0;
    const double before = mask_loss<double>(adapted, xs, {}, mask, c, 1.0);
    for (int p = 0; p < plane; ++p)
        if (mask[p] == 1.0)
            for (int ch = 0; ch < c; ++ch) adapted[ch * plane + p] += rng.uniform(-5.0, 5.0);
    const double after = mask_loss<double>(adapted, xs, {}, mask, c, 1.0);
    CHECK(after == before);  // exact
}

TEST_CASE("mask loss is affine in alpha") {
    Rng rng(28);
    for (int rep = 0; rep < 50; ++rep) {
        const int c = 3, plane = 16;
        const auto adapted = random_vec(c * plane, rng);
        const auto xs = random_vec(c * plane, rng);
        const auto xr = random_vec(c * plane, rng);
        std::vector<double> mask(plane);
        for (double& m : mask) m = rng.bernoulli(0.3) ? 1.0 : 0.0;
        const double at0 = mask_loss<double>(adapted, xs, xr, mask, c, 0.0);
        const double at1 = mask_loss<double>(adapted, xs, xr, mask, c, 1.0);
        for (double alpha : {0.25, 0.5, 0.9}) {
            const double got = mask_loss<double>(adapted, xs, xr, mask, c, alpha);
            CHECK(std::abs(got - (alpha * at1 + (1 - alpha) * at0)) < 1e-12);
        }
    }
}

TEST_CASE("total objective weighting") {
    LossReport r;
    r.gan_g = 0.5;
    r.gan_d = 0.25;
    r.cycle = 2.0;
    r.identity = 1.0;
    r.mask = 0.125;
    LossWeights w;
    w.gan = 0.0;
    w.cycle = 0.0;
    w.identity = 0.0;
    w.mask = 0.0;
    CHECK(total_objective(r, w).generator_total == doctest::Approx(0.0));
    w = LossWeights{1.0, 1.0, 1.0, 1.0, 1.0};
    CHECK(total_objective(r, w).generator_total == doctest::Approx(0.5 + 2.0 + 1.0 + 0.125));
    CHECK(total_objective(r, w).discriminator_total == doctest::Approx(0.25));
    // linear in each weight
    LossWeights w2 = w;
    w2.mask = 2.0;
    CHECK(total_objective(r, w2).generator_total - total_objective(r, w).generator_total ==
          doctest::Approx(r.mask));
}

TEST_CASE("named alpha presets stay inside the convex combination") {
    // "Mask Sim" = 1, "Mask Real" = 0, "Mask Combined" = 0.5; weight w on the
    // simulated term implies 1-w on the real term.
    LossWeights w;
    w.alpha = 0.4;
    w.validate();
    CHECK(1.0 - w.alpha == doctest::Approx(0.6));
}
