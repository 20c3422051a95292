#ifndef TACGAP_CLASSIFY_EXPERIMENT_HPP
#define TACGAP_CLASSIFY_EXPERIMENT_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tacgap/classify/classifier.hpp"
#include "tacgap/data/dataset.hpp"
#include "tacgap/nn/models.hpp"

namespace tacgap::cls {

enum class TrainSource { sim, adapted };

TrainSource train_source_from_string(const std::string& s);

// Repeated train/evaluate summary: source-domain held-out accuracy vs
// real-domain accuracy, aggregated over repeats.
struct TransferResult {
    std::string source;                // "sim" | "adapted"
    std::vector<double> source_acc;    // per repeat, percent
    std::vector<double> real_acc;
    double mean_source = 0.0, std_source = 0.0;
    double mean_real = 0.0, std_real = 0.0;
    double drop = 0.0;  // mean_source - mean_real

    nlohmann::json to_json() const;
    std::string table() const;  // text table: Model | Sim | Real
    void write(const std::filesystem::path& out_dir) const;
};

// Trains a classifier on original or adapted simulated images and tests on
// the held-out split of the source domain and on the real images. Repeats
// with seeds seed_base + r. `g_sr` is required for the adapted source.
TransferResult sim2real_experiment(TrainSource source, const data::DatasetManifest& manifest,
                                   nn::UNetGenerator* g_sr, const util::ClassifierConfig& cfg);

}  // namespace tacgap::cls

#endif
