#include "tacgap/classify/experiment.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "tacgap/errors.hpp"
#include "tacgap/eval/evaluate.hpp"

namespace tacgap::cls {

TrainSource train_source_from_string(const std::string& s) {
    if (s == "sim") return TrainSource::sim;
    if (s == "adapted") return TrainSource::adapted;
    throw ConfigError("train source must be 'sim' or 'adapted', got '" + s + "'");
}

namespace {

double mean_of(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

struct SplitData {
    std::vector<Tensor> train_src, test_src, test_real;
    std::vector<int> train_labels, test_labels;
};

}  // namespace

TransferResult sim2real_experiment(TrainSource source, const data::DatasetManifest& manifest,
                                   nn::UNetGenerator* g_sr, const util::ClassifierConfig& cfg) {
    cfg.validate();
    if (source == TrainSource::adapted && !g_sr)
        throw ConfigError("adapted train source requires a trained generator checkpoint");
    const int classes = cfg.classes > 0 ? cfg.classes : static_cast<int>(manifest.classes.size());
    if (classes != static_cast<int>(manifest.classes.size()))
        throw ConfigError("classifier class count " + std::to_string(classes) +
                          " does not match manifest (" +
                          std::to_string(manifest.classes.size()) + ")");

    auto train_refs = manifest.split("train");
    auto test_refs = manifest.split("test");
    if (test_refs.empty()) {
        // No declared split: hold out the tail fraction per class.
        train_refs.clear();
        std::vector<std::vector<data::SampleRef>> by_class(classes);
        for (const auto& r : manifest.samples) by_class[r.label].push_back(r);
        for (auto& group : by_class) {
            const int hold =
                std::max(1, static_cast<int>(std::floor(group.size() * cfg.holdout_fraction + 0.5)));
            for (std::size_t i = 0; i < group.size(); ++i)
                (i + hold >= group.size() ? test_refs : train_refs).push_back(group[i]);
        }
    }
    if (train_refs.empty()) throw DataError("sim2real experiment: no training samples");
    if (test_refs.empty()) throw DataError("sim2real experiment: no held-out samples");

    SplitData d;
    for (const auto& r : train_refs) {
        const auto s = data::load_sample(manifest, r);
        d.train_src.push_back(source == TrainSource::adapted ? eval::adapt(*g_sr, s.sim) : s.sim);
        d.train_labels.push_back(s.label);
    }
    for (const auto& r : test_refs) {
        const auto s = data::load_sample(manifest, r);
        if (!s.paired())
            throw ConfigError("sim2real experiment: held-out sample '" + s.id +
                              "' has no real image");
        d.test_src.push_back(source == TrainSource::adapted ? eval::adapt(*g_sr, s.sim) : s.sim);
        d.test_real.push_back(*s.real);
        d.test_labels.push_back(s.label);
    }

    const int input_size = d.train_src.front().h;
    TransferResult result;
    result.source = source == TrainSource::adapted ? "adapted" : "sim";
    for (int r = 0; r < cfg.repeats; ++r) {
        Rng rng(cfg.seed_base + static_cast<std::uint64_t>(r), 0x636c73);
        Classifier clf(cfg, classes, input_size, rng);
        train_classifier(clf, d.train_src, d.train_labels, cfg, rng);
        result.source_acc.push_back(evaluate_accuracy(clf, d.test_src, d.test_labels));
        result.real_acc.push_back(evaluate_accuracy(clf, d.test_real, d.test_labels));
    }
    result.mean_source = mean_of(result.source_acc);
    result.std_source = sample_std(result.source_acc, result.mean_source);
    result.mean_real = mean_of(result.real_acc);
    result.std_real = sample_std(result.real_acc, result.mean_real);
    result.drop = result.mean_source - result.mean_real;
    return result;
}

nlohmann::json TransferResult::to_json() const {
    return nlohmann::json{{"source", source},
                          {"source_acc", source_acc},
                          {"real_acc", real_acc},
                          {"mean_source", mean_source},
                          {"std_source", std_source},
                          {"mean_real", mean_real},
                          {"std_real", std_real},
                          {"drop", drop}};
}

std::string TransferResult::table() const {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2);
    out << "Model                    | Sim              | Real\n";
    out << "-------------------------+------------------+------------------\n";
    out << std::left << std::setw(24) << ("trained on " + source) << " | " << std::right
        << std::setw(6) << mean_source << "% +- " << std::setw(5) << std_source << " | "
        << std::setw(6) << mean_real << "% +- " << std::setw(5) << std_real << "\n";
    out << "drop (Sim - Real): " << drop << "%\n";
    return out.str();
}

void TransferResult::write(const std::filesystem::path& out_dir) const {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream out(out_dir / ("transfer_" + source + ".json"));
        if (!out) throw DataError("cannot write transfer result json");
        out << to_json().dump(2) << "\n";
    }
    std::ofstream out(out_dir / ("transfer_" + source + ".txt"));
    if (!out) throw DataError("cannot write transfer result table");
    out << table();
}

}  // namespace tacgap::cls
