#ifndef TACGAP_DATA_SYNTH_HPP
#define TACGAP_DATA_SYNTH_HPP

#include <array>
#include <string>
#include <vector>

#include "tacgap/data/image.hpp"
#include "tacgap/rng.hpp"

namespace tacgap::data {

// Procedural stand-in for the tap dataset: analytic indenters pressed into a
// flat elastomer, rendered with a Phong model. Gives desk-scale experiments a
// ground-truth contact region and a controllable "real" domain.

enum class IndenterShape { sphere, cylinder, ridge };

IndenterShape indenter_shape_from_string(const std::string& s);

struct IndenterSpec {
    IndenterShape shape = IndenterShape::sphere;
    double radius = 2.5e-3;    // sphere/cylinder radius, meters
    double slope = 0.8;        // ridge flank slope (rise over run)
    double center_x = 0.0;     // offset from image center, meters
    double center_y = 0.0;
    double angle_deg = 0.0;    // cylinder/ridge axis orientation
};

struct SensorGeometry {
    double elastomer_depth = 4.0e-3;  // camera-to-elastomer distance, meters
    double fov = 12.0e-3;             // imaged width, meters
    double depth_scale = 1.0e-7;      // storage quantum, meters per unit

    double pixel_pitch(int width) const { return fov / width; }
};

// Depth field of the elastomer with the indenter pressed tap_depth into it.
// Values are snapped to geo.depth_scale so that disk round-trips are exact.
DepthMap synth_depth_map(const IndenterSpec& indenter, double tap_depth, int height, int width,
                         const SensorGeometry& geo);
// Multiple indenters: intrusions combine pointwise by maximum.
DepthMap synth_depth_map(const std::vector<IndenterSpec>& indenters, double tap_depth, int height,
                         int width, const SensorGeometry& geo);

// Analytic contact radius of a sphere tap (half-width for cylinder/ridge).
double contact_radius(const IndenterSpec& indenter, double tap_depth);

struct Light {
    std::array<double, 3> dir;  // unit vector pointing from surface to light
    std::array<double, 3> rgb;
};

struct LightConfig {
    std::array<double, 3> ambient = {0.18, 0.18, 0.18};
    std::vector<Light> lights;
    double diffuse = 0.9;
    double specular = 0.25;
    double shininess = 24.0;
    // Converts per-pixel depth differences into surface slope; physically
    // 1 / pixel_pitch. The dataset generator sets width / fov.
    double gradient_gain = 5333.0;

    void validate() const;
};

// Three low-elevation colored lights, GelSight style: red from the left,
// green from the upper right, blue from the lower right.
LightConfig default_lights();

// Phong render of a depth map: ambient + per-light diffuse and specular
// terms, normals from depth gradients. Flat regions render to a constant
// background color.
TactileImage render_simulated(const DepthMap& depth, const LightConfig& lights);

struct TextureSpec {
    double ridge_amplitude = 4.0e-5;  // print-layer ridge height, meters
    double ridge_period = 4.5e-4;     // spacing between layer lines, meters
    double scratch_amplitude = 0.0;   // random scratch depth, meters
    int scratch_count = 0;
    double scratch_width = 1.5e-4;    // gaussian cross-section sigma, meters
    double deformation_gain = 0.0;    // extra intrusion fraction (softer gel)
    double light_jitter = 0.02;       // relative illumination perturbation
};

// "Real" domain emulation: the depth field is perturbed inside the contact
// region by print-layer ridges (contour lines of the intrusion), random
// scratches, and a deformation gain modeling a softer-than-simulated
// elastomer; the illumination is jittered globally. Background pixels differ
// from render_simulated only through the jitter.
TactileImage render_pseudo_real(const DepthMap& depth, const TextureSpec& texture,
                                const LightConfig& lights, const SensorGeometry& geo, Rng& rng);

}  // namespace tacgap::data

#endif
