// tacgap: dataset synthesis, texture-generation training, adaptation,
// evaluation and the Sim2Real classification experiment as reproducible runs.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "tacgap/classify/experiment.hpp"
#include "tacgap/data/dataset.hpp"
#include "tacgap/errors.hpp"
#include "tacgap/eval/evaluate.hpp"
#include "tacgap/train/trainer.hpp"
#include "tacgap/util/config.hpp"

namespace fs = std::filesystem;
using namespace tacgap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct SynthArgs {
    std::string out;
    int classes = 4;
    int count = 64;
    int resolution = 64;
    double test_fraction = 0.2;
    std::uint64_t seed = 1;
    double elastomer_depth = 4.0e-3;
    double fov = 12.0e-3;
    double ridge_amplitude = 1.0e-4;
    double ridge_period = 4.5e-4;
    double scratch_amplitude = 0.0;
    int scratch_count = 0;
    double deformation_gain = 0.35;
    double light_jitter = 0.02;
    bool write_masks = false;
};

int run_dataset_synth(const SynthArgs& a, bool dry_run) {
    data::SynthDatasetConfig cfg;
    cfg.classes = a.classes;
    cfg.count = a.count;
    cfg.resolution = a.resolution;
    cfg.test_fraction = a.test_fraction;
    cfg.seed = a.seed;
    cfg.geometry.elastomer_depth = a.elastomer_depth;
    cfg.geometry.fov = a.fov;
    cfg.texture.ridge_amplitude = a.ridge_amplitude;
    cfg.texture.ridge_period = a.ridge_period;
    cfg.texture.scratch_amplitude = a.scratch_amplitude;
    cfg.texture.scratch_count = a.scratch_count;
    cfg.texture.deformation_gain = a.deformation_gain;
    cfg.texture.light_jitter = a.light_jitter;
    cfg.write_masks = a.write_masks;
    data::synth_class_templates(cfg.classes);  // validates the class count
    if (dry_run) {
        std::cout << "dry-run: would synthesize " << cfg.count << " paired samples ("
                  << cfg.classes << " classes, " << cfg.resolution << "x" << cfg.resolution
                  << ", seed " << cfg.seed << ") into " << a.out << "\n";
        return kExitOk;
    }
    const auto manifest = data::write_synth_dataset(a.out, cfg);
    std::cout << "wrote " << manifest.samples.size() << " samples ("
              << manifest.split("train").size() << " train / " << manifest.split("test").size()
              << " test) to " << a.out << "\n";
    return kExitOk;
}

int run_train(const std::string& config_path, const std::string& out_dir,
              const std::string& resume, std::int64_t seed_override, bool dry_run) {
    std::unique_ptr<train::Trainer> trainer;
    if (!resume.empty()) {
        trainer = train::Trainer::restore(resume);
        std::cout << "resumed from " << resume << " at step " << trainer->step() << "\n";
    } else {
        util::TrainConfig cfg = util::TrainConfig::from_file(config_path);
        if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
        cfg.validate();
        auto manifest = data::DatasetManifest::load(cfg.manifest);
        manifest.validate(true);
        if (dry_run) {
            std::cout << "dry-run: config valid; would train " << cfg.epochs << " epochs on "
                      << manifest.split("train").size() << " samples into " << out_dir << "\n";
            return kExitOk;
        }
        trainer = std::make_unique<train::Trainer>(cfg, manifest);
    }
    if (dry_run) {
        std::cout << "dry-run: checkpoint valid; would continue training into " << out_dir
                  << "\n";
        return kExitOk;
    }
    const auto final_ckpt = trainer->run(out_dir);
    std::cout << "finished at step " << trainer->step() << "; final checkpoint " << final_ckpt
              << "\n";
    return kExitOk;
}

int run_adapt(const std::string& checkpoint, const std::string& input_dir,
              const std::string& out_dir, bool dry_run) {
    auto g = train::load_generator(checkpoint);
    std::vector<fs::path> inputs;
    for (const auto& e : fs::directory_iterator(input_dir))
        if (e.is_regular_file() && e.path().extension() == ".png")
            inputs.push_back(e.path());
    std::sort(inputs.begin(), inputs.end());
    if (inputs.empty()) throw DataError("no .png inputs in " + input_dir);
    if (dry_run) {
        std::cout << "dry-run: would adapt " << inputs.size() << " images into " << out_dir
                  << "\n";
        return kExitOk;
    }
    fs::create_directories(out_dir);
    for (const auto& p : inputs) {
        const Tensor sim = data::normalize_image(data::read_rgb8_png(p));
        const Tensor adapted = eval::adapt(*g, sim);
        data::write_rgb8_png(fs::path(out_dir) / p.filename(), data::denormalize_image(adapted));
    }
    std::cout << "adapted " << inputs.size() << " images into " << out_dir << "\n";
    return kExitOk;
}

int run_eval(const std::string& checkpoint, const std::string& manifest_path,
             const std::string& out_dir, const std::string& split, bool dry_run) {
    auto g = train::load_generator(checkpoint);
    const auto manifest = data::DatasetManifest::load(manifest_path);
    const auto refs = manifest.split(split);
    if (refs.empty()) throw DataError("manifest has no '" + split + "' samples");
    for (const auto& r : refs)
        if (r.real_file.empty())
            throw DataError("eval requires a paired manifest; sample '" + r.id +
                            "' has no real image");
    if (dry_run) {
        std::cout << "dry-run: would evaluate " << refs.size() << " pairs into " << out_dir
                  << "\n";
        return kExitOk;
    }
    std::vector<data::SamplePair> pairs;
    for (const auto& r : refs) pairs.push_back(data::load_sample(manifest, r));
    const auto report = eval::evaluate_pairs(*g, pairs, fs::path(out_dir) / "difference_maps");
    report.write(out_dir);
    std::cout << "evaluated " << report.per_sample.size() << " pairs: mean SSIM "
              << report.mean_ssim << ", mean MAE " << report.mean_mae << "%, mean texture leak "
              << report.mean_texture_leak << "\n";
    return kExitOk;
}

int run_classify(const std::string& source_str, const std::string& manifest_path,
                 const std::string& checkpoint, const std::string& config_path,
                 const std::string& out_dir, int repeats_override, std::int64_t seed_override,
                 bool dry_run) {
    const auto source = cls::train_source_from_string(source_str);
    util::ClassifierConfig cfg;
    if (!config_path.empty()) cfg = util::ClassifierConfig::from_file(config_path);
    if (repeats_override > 0) cfg.repeats = repeats_override;
    if (seed_override >= 0) cfg.seed_base = static_cast<std::uint64_t>(seed_override);
    cfg.validate();
    if (source == cls::TrainSource::adapted && checkpoint.empty())
        throw ConfigError("--source adapted requires --checkpoint");
    const auto manifest = data::DatasetManifest::load(manifest_path);
    std::unique_ptr<nn::UNetGenerator> g;
    if (source == cls::TrainSource::adapted) g = train::load_generator(checkpoint);
    if (dry_run) {
        std::cout << "dry-run: would run " << cfg.repeats << " repeats (" << cfg.epochs
                  << " epochs each) training on '" << source_str << "' images into " << out_dir
                  << "\n";
        return kExitOk;
    }
    const auto result = cls::sim2real_experiment(source, manifest, g.get(), cfg);
    result.write(out_dir);
    std::cout << result.table();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sim2Real tactile texture-generation toolkit"};
    app.require_subcommand(1);
    bool dry_run = false;
    app.add_flag("--dry-run", dry_run, "validate inputs and print the plan without writing");

    // dataset synth
    auto* dataset = app.add_subcommand("dataset", "dataset utilities");
    auto* synth = dataset->add_subcommand("synth", "generate a paired synthetic dataset");
    SynthArgs sa;
    synth->add_option("--out", sa.out, "output directory")->required();
    synth->add_option("--classes", sa.classes, "number of object classes (2..8)");
    synth->add_option("--count", sa.count, "total sample count");
    synth->add_option("--resolution", sa.resolution, "image resolution");
    synth->add_option("--test-fraction", sa.test_fraction, "held-out fraction per class");
    synth->add_option("--seed", sa.seed, "rng seed");
    synth->add_option("--elastomer-depth", sa.elastomer_depth, "elastomer depth, meters");
    synth->add_option("--fov", sa.fov, "imaged width, meters");
    synth->add_option("--ridge-amp", sa.ridge_amplitude, "print-ridge amplitude, meters");
    synth->add_option("--ridge-period", sa.ridge_period, "print-ridge period, meters");
    synth->add_option("--scratch-amp", sa.scratch_amplitude, "scratch amplitude, meters");
    synth->add_option("--scratch-count", sa.scratch_count, "scratches per sample");
    synth->add_option("--deform-gain", sa.deformation_gain,
                      "extra intrusion fraction in the real domain (softer gel)");
    synth->add_option("--light-jitter", sa.light_jitter, "relative illumination jitter");
    synth->add_flag("--write-masks", sa.write_masks, "also write {0,255} mask PNGs");

    // train
    auto* train_cmd = app.add_subcommand("train", "train the texture generation network");
    std::string train_config, train_out, train_resume;
    std::int64_t train_seed = -1;
    train_cmd->add_option("--config", train_config, "TOML or JSON config file");
    train_cmd->add_option("--out", train_out, "run directory")->required();
    train_cmd->add_option("--resume", train_resume, "checkpoint to continue from");
    train_cmd->add_option("--seed", train_seed, "override the config seed");

    // adapt
    auto* adapt_cmd = app.add_subcommand("adapt", "apply G_SR to a directory of images");
    std::string adapt_ckpt, adapt_in, adapt_out;
    adapt_cmd->add_option("--checkpoint", adapt_ckpt, "training checkpoint")->required();
    adapt_cmd->add_option("--input", adapt_in, "directory of simulated .png images")->required();
    adapt_cmd->add_option("--out", adapt_out, "output directory")->required();

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "paired adaptation metrics (SSIM, MAE, leak)");
    std::string eval_ckpt, eval_manifest, eval_out, eval_split = "test";
    eval_cmd->add_option("--checkpoint", eval_ckpt, "training checkpoint")->required();
    eval_cmd->add_option("--manifest", eval_manifest, "paired dataset manifest")->required();
    eval_cmd->add_option("--out", eval_out, "output directory")->required();
    eval_cmd->add_option("--split", eval_split, "manifest split to evaluate (default test)");

    // classify
    auto* cls_cmd = app.add_subcommand("classify", "Sim2Real transfer classification");
    std::string cls_source, cls_manifest, cls_ckpt, cls_config, cls_out;
    int cls_repeats = 0;
    std::int64_t cls_seed = -1;
    cls_cmd->add_option("--source", cls_source, "training images: sim | adapted")->required();
    cls_cmd->add_option("--manifest", cls_manifest, "dataset manifest")->required();
    cls_cmd->add_option("--checkpoint", cls_ckpt, "generator checkpoint (adapted source)");
    cls_cmd->add_option("--config", cls_config, "classifier config file");
    cls_cmd->add_option("--out", cls_out, "output directory")->required();
    cls_cmd->add_option("--repeats", cls_repeats, "override repeat count");
    cls_cmd->add_option("--seed", cls_seed, "override the seed base");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return run_dataset_synth(sa, dry_run);
        if (train_cmd->parsed()) {
            if (train_config.empty() && train_resume.empty())
                throw ConfigError("train needs --config or --resume");
            return run_train(train_config, train_out, train_resume, train_seed, dry_run);
        }
        if (adapt_cmd->parsed()) return run_adapt(adapt_ckpt, adapt_in, adapt_out, dry_run);
        if (eval_cmd->parsed())
            return run_eval(eval_ckpt, eval_manifest, eval_out, eval_split, dry_run);
        if (cls_cmd->parsed())
            return run_classify(cls_source, cls_manifest, cls_ckpt, cls_config, cls_out,
                                cls_repeats, cls_seed, dry_run);
        std::cerr << "no subcommand given\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
