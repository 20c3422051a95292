#include "tacgap/data/synth.hpp"

#include <algorithm>
#include <cmath>

#include "tacgap/errors.hpp"
#include "tacgap/kernels.hpp"

namespace tacgap::data {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Height of the indenter surface above its lowest point, at in-plane
// distance rho from the contact axis. Infinity marks "outside the footprint".
double profile_height(const IndenterSpec& ind, double px, double py) {
    switch (ind.shape) {
        case IndenterShape::sphere: {
            const double dx = px - ind.center_x, dy = py - ind.center_y;
            const double rho2 = dx * dx + dy * dy;
            if (rho2 >= ind.radius * ind.radius) return 1e9;
            return ind.radius - std::sqrt(ind.radius * ind.radius - rho2);
        }
        case IndenterShape::cylinder: {
            const double a = ind.angle_deg * kPi / 180.0;
            // distance perpendicular to the cylinder axis
            const double t =
                -(px - ind.center_x) * std::sin(a) + (py - ind.center_y) * std::cos(a);
            if (std::abs(t) >= ind.radius) return 1e9;
            return ind.radius - std::sqrt(ind.radius * ind.radius - t * t);
        }
        case IndenterShape::ridge: {
            const double a = ind.angle_deg * kPi / 180.0;
            const double t =
                -(px - ind.center_x) * std::sin(a) + (py - ind.center_y) * std::cos(a);
            return ind.slope * std::abs(t);
        }
    }
    return 1e9;
}
}  // namespace

IndenterShape indenter_shape_from_string(const std::string& s) {
    if (s == "sphere") return IndenterShape::sphere;
    if (s == "cylinder") return IndenterShape::cylinder;
    if (s == "ridge") return IndenterShape::ridge;
    throw ConfigError("unknown indenter shape '" + s + "'");
}

double contact_radius(const IndenterSpec& ind, double tap_depth) {
    const double d = tap_depth;
    switch (ind.shape) {
        case IndenterShape::sphere:
        case IndenterShape::cylinder: {
            const double r = ind.radius;
            if (d <= 0.0) return 0.0;
            if (d >= r) return r;
            return std::sqrt(2.0 * r * d - d * d);
        }
        case IndenterShape::ridge:
            return d <= 0.0 ? 0.0 : d / ind.slope;
    }
    return 0.0;
}

DepthMap synth_depth_map(const std::vector<IndenterSpec>& indenters, double tap_depth, int height,
                         int width, const SensorGeometry& geo) {
    if (tap_depth < 0.0) throw ConfigError("tap_depth must be >= 0");
    if (height < 8 || width < 8) throw ConfigError("depth map dimensions must be >= 8");
    for (const auto& ind : indenters) {
        if (ind.shape != IndenterShape::ridge && ind.radius <= 0.0)
            throw ConfigError("indenter radius must be > 0");
        if (ind.shape == IndenterShape::ridge && ind.slope <= 0.0)
            throw ConfigError("ridge slope must be > 0");
        if (2.0 * contact_radius(ind, tap_depth) > geo.fov)
            throw ConfigError("indenter contact footprint exceeds the imaged area");
    }
    DepthMap depth;
    depth.height = height;
    depth.width = width;
    depth.scale = geo.depth_scale;
    depth.values.resize(static_cast<std::size_t>(height) * width);
    const double pitch = geo.pixel_pitch(width);
    const double cx = (width - 1) / 2.0, cy = (height - 1) / 2.0;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            const double px = (x - cx) * pitch;
            const double py = (y - cy) * pitch;
            double intrusion = 0.0;
            for (const auto& ind : indenters) {
                const double h = profile_height(ind, px, py);
                intrusion = std::max(intrusion, tap_depth - h);
            }
            const double d = geo.elastomer_depth - intrusion;
            // Snap to the storage grid; see DepthMap::scale.
            depth.at(y, x) =
                static_cast<float>(std::floor(d / geo.depth_scale + 0.5) * geo.depth_scale);
        }
    return depth;
}

DepthMap synth_depth_map(const IndenterSpec& indenter, double tap_depth, int height, int width,
                         const SensorGeometry& geo) {
    return synth_depth_map(std::vector<IndenterSpec>{indenter}, tap_depth, height, width, geo);
}

void LightConfig::validate() const {
    if (lights.empty()) throw ConfigError("light config must define at least one light");
    for (const auto& l : lights) {
        const double n = l.dir[0] * l.dir[0] + l.dir[1] * l.dir[1] + l.dir[2] * l.dir[2];
        if (n < 1e-12) throw ConfigError("light direction must be nonzero");
    }
}

LightConfig default_lights() {
    LightConfig cfg;
    cfg.lights = {
        {{-0.80, 0.00, 0.60}, {0.95, 0.12, 0.10}},
        {{0.57, -0.57, 0.59}, {0.10, 0.90, 0.15}},
        {{0.57, 0.57, 0.59}, {0.12, 0.15, 0.95}},
    };
    return cfg;
}

TactileImage render_simulated(const DepthMap& depth, const LightConfig& lights) {
    lights.validate();
    depth.validate();
    const int h = depth.height, w = depth.width;
    // Height field toward the camera; gradients give the surface normal.
    std::vector<double> ndir;
    ndir.reserve(lights.lights.size() * 3);
    for (const auto& l : lights.lights) {
        const double n = std::sqrt(l.dir[0] * l.dir[0] + l.dir[1] * l.dir[1] + l.dir[2] * l.dir[2]);
        ndir.push_back(l.dir[0] / n);
        ndir.push_back(l.dir[1] / n);
        ndir.push_back(l.dir[2] / n);
    }
    Tensor out(1, 3, h, w);
    const bool par = kernels::parallel_enabled();
#pragma omp parallel for schedule(static) if (par)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int xm = std::max(x - 1, 0), xp = std::min(x + 1, w - 1);
            const int ym = std::max(y - 1, 0), yp = std::min(y + 1, h - 1);
            // depth decreases toward the camera, so height = -depth up to a
            // constant; pixel pitch cancels into an overall gradient gain.
            const double gx = -(depth.at(y, xp) - depth.at(y, xm)) / ((xp - xm));
            const double gy = -(depth.at(yp, x) - depth.at(ym, x)) / ((yp - ym));
            const double hx = gx * lights.gradient_gain, hy = gy * lights.gradient_gain;
            const double inv = 1.0 / std::sqrt(hx * hx + hy * hy + 1.0);
            const double nx = -hx * inv, ny = -hy * inv, nz = inv;
            double rgb[3] = {lights.ambient[0], lights.ambient[1], lights.ambient[2]};
            for (std::size_t li = 0; li < lights.lights.size(); ++li) {
                const double lx = ndir[3 * li], ly = ndir[3 * li + 1], lz = ndir[3 * li + 2];
                const double ndotl = nx * lx + ny * ly + nz * lz;
                const double diff = lights.diffuse * std::max(0.0, ndotl);
                // viewer at +z: R.V reduces to the z component of the
                // reflected light direction
                const double rz = 2.0 * ndotl * nz - lz;
                const double spec =
                    lights.specular * std::pow(std::max(0.0, rz), lights.shininess);
                for (int c = 0; c < 3; ++c) rgb[c] += lights.lights[li].rgb[c] * (diff + spec);
            }
            for (int c = 0; c < 3; ++c) {
                const double v = std::clamp(rgb[c], 0.0, 1.0);
                out.at(0, c, y, x) = static_cast<float>(v * 2.0 - 1.0);
            }
        }
    }
    return out;
}

TactileImage render_pseudo_real(const DepthMap& depth, const TextureSpec& texture,
                                const LightConfig& lights, const SensorGeometry& geo, Rng& rng) {
    lights.validate();
    depth.validate();
    const int h = depth.height, w = depth.width;

    // Global illumination jitter (applies to contact and background alike).
    LightConfig jittered = lights;
    const double aj = 1.0 + texture.light_jitter * rng.uniform(-1.0, 1.0);
    for (double& a : jittered.ambient) a *= aj;
    for (auto& l : jittered.lights) {
        const double lj = 1.0 + texture.light_jitter * rng.uniform(-1.0, 1.0);
        for (double& c : l.rgb) c *= lj;
    }

    // Scratch line segments, drawn before the per-pixel pass so the rng
    // sequence is independent of resolution.
    struct Scratch {
        double ox, oy, dx, dy;
    };
    std::vector<Scratch> scratches;
    for (int i = 0; i < texture.scratch_count; ++i) {
        const double ang = rng.uniform(0.0, kPi);
        scratches.push_back({rng.uniform(-0.5, 0.5) * geo.fov, rng.uniform(-0.5, 0.5) * geo.fov,
                             std::cos(ang), std::sin(ang)});
    }

    const double pitch = geo.pixel_pitch(w);
    const double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;
    DepthMap perturbed = depth;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double d = depth.at(y, x);
            if (!(d < geo.elastomer_depth)) continue;  // texture only in contact
            const double intrusion = geo.elastomer_depth - d;
            double delta = texture.deformation_gain * intrusion;
            if (texture.ridge_amplitude > 0.0 && texture.ridge_period > 0.0)
                delta += texture.ridge_amplitude *
                         std::sin(2.0 * kPi * intrusion / texture.ridge_period);
            if (texture.scratch_amplitude > 0.0) {
                const double px = (x - cx) * pitch, py = (y - cy) * pitch;
                for (const auto& s : scratches) {
                    const double t = -(px - s.ox) * s.dy + (py - s.oy) * s.dx;
                    delta += texture.scratch_amplitude *
                             std::exp(-0.5 * t * t / (texture.scratch_width * texture.scratch_width));
                }
            }
            perturbed.at(y, x) = static_cast<float>(d - delta);
        }

    TactileImage textured = render_simulated(perturbed, jittered);
    TactileImage plain = render_simulated(depth, jittered);
    // Composite by the contact region so texture shading cannot bleed past
    // the mask boundary.
    TactileImage out(1, 3, h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const bool contact = static_cast<double>(depth.at(y, x)) < geo.elastomer_depth;
            for (int c = 0; c < 3; ++c)
                out.at(0, c, y, x) = contact ? textured.at(0, c, y, x) : plain.at(0, c, y, x);
        }
    return out;
}

}  // namespace tacgap::data
