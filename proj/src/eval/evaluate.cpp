#include "tacgap/eval/evaluate.hpp"

#include <fstream>

#include "tacgap/errors.hpp"

namespace tacgap::eval {

Tensor adapt(nn::UNetGenerator& g_sr, const Tensor& sim) {
    nn::UNetCtx ctx;
    return g_sr.forward(sim, ctx, false, nullptr);
}

nlohmann::json EvalReport::to_json() const {
    nlohmann::json j;
    j["count"] = per_sample.size();
    j["samples"] = nlohmann::json::array();
    for (const auto& s : per_sample) {
        nlohmann::json js{{"id", s.id},
                          {"ssim", s.ssim},
                          {"mae_percent", s.mae},
                          {"texture_leak", s.texture_leak}};
        if (!s.diff_map_file.empty()) js["difference_map"] = s.diff_map_file;
        j["samples"].push_back(std::move(js));
    }
    if (!per_sample.empty()) {
        j["aggregates"] = {{"ssim", mean_ssim},
                           {"mae_percent", mean_mae},
                           {"texture_leak", mean_texture_leak}};
    }
    return j;
}

void EvalReport::write(const std::filesystem::path& out_dir) const {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream out(out_dir / "report.json");
        if (!out) throw DataError("cannot write " + (out_dir / "report.json").string());
        out << to_json().dump(2) << "\n";
    }
    std::ofstream csv(out_dir / "per_sample.csv");
    if (!csv) throw DataError("cannot write " + (out_dir / "per_sample.csv").string());
    csv << "id,ssim,mae_percent,texture_leak\n";
    for (const auto& s : per_sample)
        csv << s.id << ',' << s.ssim << ',' << s.mae << ',' << s.texture_leak << '\n';
}

EvalReport evaluate_pairs(nn::UNetGenerator& g_sr, const std::vector<data::SamplePair>& pairs,
                          const std::optional<std::filesystem::path>& map_dir) {
    EvalReport report;
    if (map_dir) std::filesystem::create_directories(*map_dir);
    double sum_ssim = 0.0, sum_mae = 0.0, sum_leak = 0.0;
    for (const auto& pair : pairs) {
        if (!pair.paired())
            throw DataError("evaluate_pairs: sample '" + pair.id + "' has no real image");
        const Tensor adapted = adapt(g_sr, pair.sim);
        SampleEval s;
        s.id = pair.id;
        s.ssim = ssim(adapted, *pair.real);
        s.mae = mae_percent(adapted, *pair.real);
        s.texture_leak = texture_leak(adapted, pair.sim, pair.mask);
        if (map_dir) {
            const Tensor map = difference_map(adapted, *pair.real);
            std::vector<std::uint8_t> px(map.size());
            for (std::size_t i = 0; i < map.size(); ++i) {
                const double v = std::clamp(static_cast<double>(map.v[i]), 0.0, 1.0);
                px[i] = static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
            }
            const std::string name = pair.id + ".diff.png";
            data::write_gray8_png(*map_dir / name, map.w, map.h, px);
            s.diff_map_file = name;
        }
        sum_ssim += s.ssim;
        sum_mae += s.mae;
        sum_leak += s.texture_leak;
        report.per_sample.push_back(std::move(s));
    }
    if (!report.per_sample.empty()) {
        const double n = static_cast<double>(report.per_sample.size());
        report.mean_ssim = sum_ssim / n;
        report.mean_mae = sum_mae / n;
        report.mean_texture_leak = sum_leak / n;
    }
    return report;
}

}  // namespace tacgap::eval
