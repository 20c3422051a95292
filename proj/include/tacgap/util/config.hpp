#ifndef TACGAP_UTIL_CONFIG_HPP
#define TACGAP_UTIL_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "tacgap/data/augment.hpp"
#include "tacgap/losses.hpp"

namespace tacgap::util {

struct OptimizerConfig {
    double lr = 2e-4;
    double beta1 = 0.5;
    double beta2 = 0.999;
    // Constant for the first half of the epochs, then linear decay to zero.
    bool linear_decay = true;
};

struct ModelConfig {
    int gen_base_filters = 64;
    int disc_base_filters = 64;
    int disc_layers = 4;
    double dropout_rate = 0.5;
    double leaky_slope = 0.2;
};

// Full hyperparameter set of a training run. Serializes to/from the JSON
// representation shared by .toml and .json config files.
struct TrainConfig {
    std::string manifest;
    int resolution = 64;

    ModelConfig model;
    losses::LossWeights weights;
    std::string adv_mode = "least-squares";
    OptimizerConfig optimizer;

    int batch_size = 1;
    int epochs = 1;
    int max_steps = 0;  // 0 = no cap; otherwise stops the run early
    std::uint64_t seed = 1;
    int checkpoint_every = 0;  // steps between checkpoints; 0 = epoch ends only
    int buffer_size = 50;
    bool paired_batches = false;  // true = draw x_r from the same sample as x_s

    bool augment_enabled = true;
    data::AugmentationConfig augment;

    static TrainConfig from_json(const nlohmann::json& j);
    static TrainConfig from_file(const std::filesystem::path& path);
    nlohmann::json to_json() const;
    void validate() const;
    std::uint64_t hash() const;
};

struct ClassifierConfig {
    std::string backbone = "smallconv";
    int head_units1 = 256;
    int head_units2 = 128;
    int classes = 0;  // 0 = take from manifest
    int epochs = 30;
    int repeats = 10;
    int batch_size = 16;
    double lr = 1e-3;
    std::uint64_t seed_base = 1;
    double holdout_fraction = 0.2;

    static ClassifierConfig from_json(const nlohmann::json& j);
    static ClassifierConfig from_file(const std::filesystem::path& path);
    nlohmann::json to_json() const;
    void validate() const;
};

std::uint64_t fnv1a64(const std::string& data);

}  // namespace tacgap::util

#endif
