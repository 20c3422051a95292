#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tacgap/data/synth.hpp"
#include "tacgap/errors.hpp"
#include "tacgap/mask.hpp"
#include "tacgap/rng.hpp"

using namespace tacgap;
using namespace tacgap::mask;
using tacgap::data::DepthMap;

namespace {
DepthMap flat_depth(int h, int w, float value) {
    DepthMap d;
    d.height = h;
    d.width = w;
    d.values.assign(static_cast<std::size_t>(h) * w, value);
    return d;
}
}  // namespace

TEST_CASE("strict threshold: exact-equality depth is background") {
    DepthMap d = flat_depth(8, 8, 0.004f);
    ContactMask m = mask_from_depth(d, 0.004);
    for (auto v : m.values) CHECK(v == 0);
    CHECK(mask_coverage(m) == doctest::Approx(0.0));

    d.values[13] = 0.004f - 1e-6f;
    m = mask_from_depth(d, 0.004);
    int ones = 0;
    for (auto v : m.values) ones += v;
    CHECK(ones == 1);
    CHECK(m.values[13] == 1);
}

TEST_CASE("non-finite depth is rejected") {
    DepthMap d = flat_depth(8, 8, 0.004f);
    d.values[3] = std::numeric_limits<float>::quiet_NaN();
    CHECK_THROWS_AS(mask_from_depth(d, 0.004), DataError);
    CHECK_THROWS_AS(mask_from_depth(flat_depth(8, 8, 1.0f), 0.0), ConfigError);
}

TEST_CASE("monotonicity: raising the threshold only grows the mask") {
    Rng rng(31);
    DepthMap d = flat_depth(16, 16, 0.0f);
    for (float& v : d.values) v = static_cast<float>(rng.uniform(0.0, 0.01));
    const ContactMask lo = mask_from_depth(d, 0.003);
    const ContactMask hi = mask_from_depth(d, 0.007);
    for (std::size_t i = 0; i < lo.values.size(); ++i)
        if (lo.values[i] == 1) CHECK(hi.values[i] == 1);
}

TEST_CASE("idempotent under clipping at the threshold") {
    Rng rng(32);
    DepthMap d = flat_depth(12, 12, 0.0f);
    for (float& v : d.values) v = static_cast<float>(rng.uniform(0.0, 0.008));
    const double e = 0.004;
    const ContactMask m1 = mask_from_depth(d, e);
    DepthMap clipped = d;
    for (float& v : clipped.values) v = std::min(v, static_cast<float>(e));
    const ContactMask m2 = mask_from_depth(clipped, e);
    CHECK(m1.values == m2.values);
}

TEST_CASE("background selector complements and mask coverage counts") {
    ContactMask m;
    m.height = 2;
    m.width = 2;
    m.values = {1, 1, 1, 1};
    Tensor bg = background_selector(m);
    for (float v : bg.v) CHECK(v == 0.0f);
    m.values = {0, 0, 0, 0};
    bg = background_selector(m);
    for (float v : bg.v) CHECK(v == 1.0f);
    CHECK(mask_coverage(m) == doctest::Approx(0.0));
    m.values = {1, 1, 0, 0};  // half plane
    CHECK(mask_coverage(m) == doctest::Approx(0.5));

    // complement of complement is the identity
    Tensor bg1 = background_selector(m);
    ContactMask inv;
    inv.height = 2;
    inv.width = 2;
    inv.values.resize(4);
    for (int i = 0; i < 4; ++i) inv.values[i] = static_cast<std::uint8_t>(bg1.v[i]);
    Tensor bg2 = background_selector(inv);
    for (int i = 0; i < 4; ++i) CHECK(bg2.v[i] == static_cast<float>(m.values[i]));
}

TEST_CASE("sphere tap mask area matches the analytic contact disc") {
    Rng rng(33);
    data::SensorGeometry geo;
    const int res = 96;
    for (int trial = 0; trial < 20; ++trial) {
        data::IndenterSpec ind;
        ind.shape = data::IndenterShape::sphere;
        ind.radius = rng.uniform(1.5e-3, 4.0e-3);
        const double tap = rng.uniform(2.0e-4, 1.2e-3);
        const DepthMap depth = data::synth_depth_map(ind, tap, res, res, geo);
        const ContactMask m = mask_from_depth(depth, geo.elastomer_depth);

        const double pitch = geo.pixel_pitch(res);
        const double rho_px = data::contact_radius(ind, tap) / pitch;
        double area = 0.0;
        for (auto v : m.values) area += v;
        const double expected = 3.14159265358979323846 * rho_px * rho_px;
        const double band = 2.0 * 3.14159265358979323846 * rho_px + 4.0;  // 1-px perimeter band
        CHECK(std::abs(area - expected) <= band);
    }
}
