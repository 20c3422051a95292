#ifndef TACGAP_TRAIN_TRAINER_HPP
#define TACGAP_TRAIN_TRAINER_HPP

#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "tacgap/data/dataset.hpp"
#include "tacgap/losses.hpp"
#include "tacgap/nn/adam.hpp"
#include "tacgap/nn/models.hpp"
#include "tacgap/util/config.hpp"

namespace tacgap::train {

// Loads only the S->R generator out of a training checkpoint (enough for
// adapt/eval/classify; no dataset access).
std::unique_ptr<nn::UNetGenerator> load_generator(const std::filesystem::path& checkpoint);

// History pool of generated images shown to the discriminators, the usual
// GAN stabilizer. Capacity 0 disables it (fakes pass straight through).
class ImageBuffer {
public:
    explicit ImageBuffer(int capacity) : capacity_(capacity) {}

    // One (1,c,h,w) image in, one out; the pool keeps or swaps at random.
    Tensor query(const Tensor& fake, Rng& rng);

    const std::vector<Tensor>& items() const { return items_; }
    void set_items(std::vector<Tensor> items) { items_ = std::move(items); }
    int capacity() const { return capacity_; }

private:
    int capacity_;
    std::vector<Tensor> items_;
};

// One training batch. `real` is the R-domain stream (unpaired draw);
// `paired_real` is the real image aligned with `sim`, present when the
// mask loss needs it (alpha < 1).
struct Batch {
    Tensor sim;   // (n, 3, h, w)
    Tensor real;  // (n, 3, h, w)
    Tensor mask;  // (n, 1, h, w), derived from the sim samples' depth
    std::optional<Tensor> paired_real;
};

class Trainer {
public:
    Trainer(const util::TrainConfig& cfg, const data::DatasetManifest& manifest);

    // One optimization step: generators first (joint total), then both
    // discriminators on buffered fakes.
    losses::LossReport train_step(const Batch& batch);

    // Full loop with CSV log and checkpoints under out_dir. Returns the path
    // of the final checkpoint.
    std::filesystem::path run(const std::filesystem::path& out_dir);

    Batch make_batch(int epoch, int step_in_epoch) const;
    int steps_per_epoch() const;
    double lr_for_epoch(int epoch) const;

    void save_checkpoint(const std::filesystem::path& path) const;
    // Rebuilds a trainer from a checkpoint (config is embedded). The config
    // hash must match the embedded one; pass override_manifest to point at a
    // relocated dataset.
    static std::unique_ptr<Trainer> restore(const std::filesystem::path& path,
                                            const std::string& override_manifest = "");

    // Inference-mode adaptation (dropout off).
    Tensor adapt(const Tensor& sim);

    nn::UNetGenerator& g_sr() { return *g_sr_; }
    nn::UNetGenerator& g_rs() { return *g_rs_; }
    nn::PatchDiscriminator& d_r() { return *d_r_; }
    nn::PatchDiscriminator& d_s() { return *d_s_; }
    const util::TrainConfig& config() const { return cfg_; }
    long long step() const { return step_; }
    int epoch() const { return epoch_; }
    const std::vector<losses::LossReport>& log() const { return log_; }

    // Sub-steps exposed so tests can assert the frozen-network invariants.
    void generator_update(const Batch& batch, double lr, losses::LossReport& report,
                          Tensor& fake_r_out, Tensor& fake_s_out);
    void discriminator_update(const Batch& batch, const Tensor& fake_r_now,
                              const Tensor& fake_s_now, double lr, losses::LossReport& report);

private:
    void build_networks();

    util::TrainConfig cfg_;
    data::DatasetManifest manifest_;
    std::vector<data::SamplePair> train_set_;
    std::vector<int> real_pool_;  // indices of samples with a real image

    std::unique_ptr<nn::UNetGenerator> g_sr_, g_rs_;
    std::unique_ptr<nn::PatchDiscriminator> d_r_, d_s_;
    std::vector<nn::Param*> params_g_, params_d_;
    std::unique_ptr<nn::Adam> opt_g_, opt_d_;
    ImageBuffer buffer_r_{50}, buffer_s_{50};
    Rng rng_;

    long long step_ = 0;
    int epoch_ = 0;
    std::vector<losses::LossReport> log_;
};

}  // namespace tacgap::train

#endif
