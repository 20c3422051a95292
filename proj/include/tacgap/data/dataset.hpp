#ifndef TACGAP_DATA_DATASET_HPP
#define TACGAP_DATA_DATASET_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "tacgap/data/image.hpp"
#include "tacgap/data/synth.hpp"

namespace tacgap::data {

// One manifest entry. Paths are relative to the manifest root; real_file may
// be empty (unpaired sample).
struct SampleRef {
    std::string id;
    int label = 0;
    std::string split = "train";  // "train" | "test"
    std::string sim_file;
    std::string real_file;
    std::string depth_file;
    SampleMeta meta;
};

// JSON document describing the on-disk dataset
// (layout: root/<class>/<sample_id>.{sim,real,depth}.png).
struct DatasetManifest {
    std::filesystem::path root;
    std::vector<std::string> classes;
    double elastomer_depth = 4.0e-3;
    double depth_scale = 1.0e-7;
    int resolution = 256;
    std::string image_format = "png8+png16";
    std::vector<SampleRef> samples;

    static DatasetManifest load(const std::filesystem::path& json_path);
    void save(const std::filesystem::path& json_path) const;
    void validate(bool check_files) const;

    std::vector<SampleRef> split(const std::string& which) const;
    bool fully_paired() const;
};

// Reads every referenced sample: images normalized to [-1, 1], masks derived
// from the depth maps at manifest.elastomer_depth.
std::vector<SamplePair> load_dataset(const DatasetManifest& manifest);
SamplePair load_sample(const DatasetManifest& manifest, const SampleRef& ref);

// Manifest skeleton of the reference tap dataset: 21 classes x 3x3 grid x 11
// depths (2,079 samples), split per class.
DatasetManifest reference_layout_manifest(const std::filesystem::path& root);

struct SynthDatasetConfig {
    int classes = 4;
    int count = 64;          // total sample count, round-robin over classes
    int resolution = 64;
    double test_fraction = 0.2;
    std::uint64_t seed = 1;
    SensorGeometry geometry;
    TextureSpec texture{.ridge_amplitude = 1.0e-4,
                        .ridge_period = 4.5e-4,
                        .deformation_gain = 0.35,
                        .light_jitter = 0.02};
    bool write_masks = false;  // optional {0,255} PNGs for inspection
};

// Generates a paired synthetic dataset on disk and returns its manifest
// (also written to root/manifest.json).
DatasetManifest write_synth_dataset(const std::filesystem::path& root,
                                    const SynthDatasetConfig& cfg);

// The class templates used by the synthetic dataset (exposed for tests).
std::vector<IndenterSpec> synth_class_templates(int classes);

}  // namespace tacgap::data

#endif
