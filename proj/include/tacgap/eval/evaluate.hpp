#ifndef TACGAP_EVAL_EVALUATE_HPP
#define TACGAP_EVAL_EVALUATE_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tacgap/data/image.hpp"
#include "tacgap/eval/metrics.hpp"
#include "tacgap/nn/models.hpp"

namespace tacgap::eval {

// Inference-mode application of the S->R generator.
Tensor adapt(nn::UNetGenerator& g_sr, const Tensor& sim);

struct SampleEval {
    std::string id;
    double ssim = 0.0;
    double mae = 0.0;
    double texture_leak = 0.0;
    std::string diff_map_file;
};

struct EvalReport {
    std::vector<SampleEval> per_sample;
    double mean_ssim = 0.0;
    double mean_mae = 0.0;
    double mean_texture_leak = 0.0;

    bool empty() const { return per_sample.empty(); }
    nlohmann::json to_json() const;
    // report.json + per_sample.csv under out_dir.
    void write(const std::filesystem::path& out_dir) const;
};

// Adapts every paired sample, compares against the real image (SSIM, MAE)
// and the simulated input (texture leak), optionally emitting difference
// maps. Refuses unpaired samples.
EvalReport evaluate_pairs(nn::UNetGenerator& g_sr, const std::vector<data::SamplePair>& pairs,
                          const std::optional<std::filesystem::path>& map_dir);

}  // namespace tacgap::eval

#endif
