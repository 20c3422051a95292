#include "tacgap/train/trainer.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include "tacgap/data/augment.hpp"
#include "tacgap/kernels.hpp"
#include "tacgap/nn/checkpoint.hpp"

namespace tacgap::train {

using losses::AdvMode;
using losses::LossReport;

std::unique_ptr<nn::UNetGenerator> load_generator(const std::filesystem::path& checkpoint) {
    nn::Container c = nn::load_container(checkpoint);
    if (c.header.value("kind", "") != "tacgap-train")
        throw DataError("not a training checkpoint: " + checkpoint.string());
    const util::TrainConfig cfg = util::TrainConfig::from_json(c.header.at("config"));
    nn::GeneratorSpec gs;
    gs.input_size = cfg.resolution;
    gs.base_filters = cfg.model.gen_base_filters;
    gs.dropout_rate = static_cast<float>(cfg.model.dropout_rate);
    gs.leaky_slope = static_cast<float>(cfg.model.leaky_slope);
    auto g = std::make_unique<nn::UNetGenerator>(gs);
    for (nn::Param* p : g->params("g_sr")) {
        const Tensor* v = c.find(p->name);
        if (!v) throw DataError("checkpoint missing tensor '" + p->name + "'");
        if (!v->same_shape(p->value))
            throw DataError("checkpoint tensor shape mismatch for '" + p->name + "'");
        p->value = *v;
    }
    return g;
}

Tensor ImageBuffer::query(const Tensor& fake, Rng& rng) {
    if (capacity_ <= 0) return fake;
    if (static_cast<int>(items_.size()) < capacity_) {
        items_.push_back(fake);
        return fake;
    }
    if (rng.bernoulli(0.5)) {
        const std::size_t idx = rng.uniform_u32(static_cast<std::uint32_t>(items_.size()));
        Tensor out = items_[idx];
        items_[idx] = fake;
        return out;
    }
    return fake;
}

namespace {

// Stacks per-sample (1,c,h,w) tensors into one (n,c,h,w) batch tensor.
Tensor stack(const std::vector<Tensor>& items) {
    const Tensor& first = items.front();
    Tensor out(static_cast<int>(items.size()), first.c, first.h, first.w);
    const std::size_t one = first.size();
    for (std::size_t i = 0; i < items.size(); ++i)
        std::memcpy(out.data() + i * one, items[i].data(), one * sizeof(float));
    return out;
}

Tensor slice_sample(const Tensor& batch, int index) {
    Tensor out(1, batch.c, batch.h, batch.w);
    const std::size_t one = out.size();
    std::memcpy(out.data(), batch.data() + index * one, one * sizeof(float));
    return out;
}

std::vector<int> shuffled_indices(std::size_t n, Rng rng) {
    std::vector<int> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<int>(i);
    for (std::size_t i = n; i > 1; --i)
        std::swap(idx[i - 1], idx[rng.uniform_u32(static_cast<std::uint32_t>(i))]);
    return idx;
}

}  // namespace

Trainer::Trainer(const util::TrainConfig& cfg, const data::DatasetManifest& manifest)
    : cfg_(cfg),
      manifest_(manifest),
      buffer_r_(cfg.buffer_size),
      buffer_s_(cfg.buffer_size),
      rng_(cfg.seed, 0x74726e) {  // dropout + buffer stream
    cfg_.validate();
    manifest_.validate(false);
    if (manifest_.resolution != cfg_.resolution)
        throw ConfigError("config resolution " + std::to_string(cfg_.resolution) +
                          " does not match manifest resolution " +
                          std::to_string(manifest_.resolution));
    if (cfg_.weights.alpha < 1.0 && cfg_.weights.mask > 0.0 && !manifest_.fully_paired())
        throw ConfigError("mask loss with alpha < 1 requires a fully paired dataset");

    const auto refs = manifest_.split("train");
    if (refs.empty()) throw DataError("manifest has no training samples");
    train_set_.reserve(refs.size());
    for (const auto& r : refs) train_set_.push_back(data::load_sample(manifest_, r));
    for (std::size_t i = 0; i < train_set_.size(); ++i)
        if (train_set_[i].paired()) real_pool_.push_back(static_cast<int>(i));
    if (real_pool_.empty())
        throw DataError("training requires at least one sample with a real image");

    build_networks();
}

void Trainer::build_networks() {
    nn::GeneratorSpec gs;
    gs.input_size = cfg_.resolution;
    gs.base_filters = cfg_.model.gen_base_filters;
    gs.dropout_rate = static_cast<float>(cfg_.model.dropout_rate);
    gs.leaky_slope = static_cast<float>(cfg_.model.leaky_slope);
    nn::DiscriminatorSpec ds;
    ds.input_size = cfg_.resolution;
    ds.base_filters = cfg_.model.disc_base_filters;
    ds.stride2_blocks = cfg_.model.disc_layers;
    ds.leaky_slope = static_cast<float>(cfg_.model.leaky_slope);

    g_sr_ = std::make_unique<nn::UNetGenerator>(gs);
    g_rs_ = std::make_unique<nn::UNetGenerator>(gs);
    d_r_ = std::make_unique<nn::PatchDiscriminator>(ds);
    d_s_ = std::make_unique<nn::PatchDiscriminator>(ds);

    params_g_ = g_sr_->params("g_sr");
    for (nn::Param* p : g_rs_->params("g_rs")) params_g_.push_back(p);
    params_d_ = d_r_->params("d_r");
    for (nn::Param* p : d_s_->params("d_s")) params_d_.push_back(p);

    Rng init_rng(cfg_.seed, 0x696e6974);
    nn::init_weights(params_g_, nn::InitScheme::normal002, init_rng);
    nn::init_weights(params_d_, nn::InitScheme::normal002, init_rng);

    nn::AdamConfig ac{cfg_.optimizer.beta1, cfg_.optimizer.beta2, 1e-8};
    opt_g_ = std::make_unique<nn::Adam>(params_g_, ac);
    opt_d_ = std::make_unique<nn::Adam>(params_d_, ac);
}

int Trainer::steps_per_epoch() const {
    const std::size_t n = std::max(train_set_.size(), real_pool_.size());
    return static_cast<int>((n + cfg_.batch_size - 1) / cfg_.batch_size);
}

double Trainer::lr_for_epoch(int epoch) const {
    if (!cfg_.optimizer.linear_decay) return cfg_.optimizer.lr;
    const int total = cfg_.epochs;
    const int window = total - total / 2;  // decay over the second half
    const double f = static_cast<double>(total - epoch) / window;
    return cfg_.optimizer.lr * std::clamp(f, 0.0, 1.0);
}

Batch Trainer::make_batch(int epoch, int step_in_epoch) const {
    // Data order and augmentation are pure functions of (seed, epoch, step)
    // so prefetching or resuming cannot change results.
    Rng order_seed(cfg_.seed, 0x6f726472);
    const auto order_s = shuffled_indices(train_set_.size(), order_seed.fork(2 * epoch));
    const auto order_r = shuffled_indices(real_pool_.size(), order_seed.fork(2 * epoch + 1));

    const bool need_paired_real = cfg_.weights.alpha < 1.0 && cfg_.weights.mask > 0.0;
    std::vector<Tensor> sims, reals, masks, paired;
    for (int b = 0; b < cfg_.batch_size; ++b) {
        const std::size_t k = static_cast<std::size_t>(step_in_epoch) * cfg_.batch_size + b;
        const int si = order_s[k % order_s.size()];
        const int ri = cfg_.paired_batches && train_set_[si].paired()
                           ? si
                           : real_pool_[order_r[k % order_r.size()]];

        data::SamplePair s_sample = train_set_[si];
        data::SamplePair r_sample = train_set_[ri];
        if (cfg_.augment_enabled) {
            Rng aug_s = order_seed.fork((static_cast<std::uint64_t>(epoch) << 32) ^ (k * 2 + 100));
            Rng aug_r = order_seed.fork((static_cast<std::uint64_t>(epoch) << 32) ^ (k * 2 + 101));
            s_sample = data::augment_pair(s_sample, cfg_.augment, aug_s);
            if (ri == si)
                r_sample = s_sample;
            else
                r_sample = data::augment_pair(r_sample, cfg_.augment, aug_r);
        }
        if (need_paired_real && !s_sample.paired())
            throw ConfigError("mask loss with alpha < 1 met an unpaired sample '" + s_sample.id +
                              "'");
        sims.push_back(s_sample.sim);
        masks.push_back(s_sample.mask.to_tensor());
        reals.push_back(*r_sample.real);
        if (need_paired_real) paired.push_back(*s_sample.real);
    }
    Batch batch;
    batch.sim = stack(sims);
    batch.real = stack(reals);
    batch.mask = stack(masks);
    if (need_paired_real) batch.paired_real = stack(paired);
    return batch;
}

void Trainer::generator_update(const Batch& batch, double lr, LossReport& report,
                               Tensor& fake_r_out, Tensor& fake_s_out) {
    const auto& w = cfg_.weights;
    const AdvMode mode = losses::adv_mode_from_string(cfg_.adv_mode);
    nn::zero_grads(params_g_);

    nn::UNetCtx ctx_fake_r, ctx_fake_s, ctx_cyc_s, ctx_cyc_r, ctx_id_s, ctx_id_r;
    nn::Ctx ctx_dr, ctx_ds;

    const Tensor fake_r = g_sr_->forward(batch.sim, ctx_fake_r, true, &rng_);
    const Tensor fake_s = g_rs_->forward(batch.real, ctx_fake_s, true, &rng_);
    fake_r_out = fake_r;
    fake_s_out = fake_s;

    Tensor g_fake_r(fake_r.n, fake_r.c, fake_r.h, fake_r.w);
    Tensor g_fake_s(fake_s.n, fake_s.c, fake_s.h, fake_s.w);

    // Adversarial terms (generator side): the discriminators are evaluated
    // but frozen, their parameter gradients are not accumulated.
    if (w.gan > 0.0) {
        const Tensor d_fr = d_r_->forward(fake_r, ctx_dr, true, &rng_);
        const Tensor d_fs = d_s_->forward(fake_s, ctx_ds, true, &rng_);
        const auto adv_r =
            losses::adversarial_loss<float>(losses::flat(d_fr), losses::flat(d_fr), mode);
        const auto adv_s =
            losses::adversarial_loss<float>(losses::flat(d_fs), losses::flat(d_fs), mode);
        report.gan_g = adv_r.loss_g + adv_s.loss_g;

        Tensor gd_fr(d_fr.n, d_fr.c, d_fr.h, d_fr.w);
        Tensor gd_fs(d_fs.n, d_fs.c, d_fs.h, d_fs.w);
        losses::adversarial_loss_grads<float>(losses::flat(d_fr), losses::flat(d_fr), mode,
                                              nullptr, nullptr, gd_fr.data());
        losses::adversarial_loss_grads<float>(losses::flat(d_fs), losses::flat(d_fs), mode,
                                              nullptr, nullptr, gd_fs.data());
        kernels::scale(gd_fr.size(), static_cast<float>(w.gan), gd_fr.data());
        kernels::scale(gd_fs.size(), static_cast<float>(w.gan), gd_fs.data());
        g_fake_r = d_r_->backward(gd_fr, ctx_dr, false);
        g_fake_s = d_s_->backward(gd_fs, ctx_ds, false);
    }

    // Cycle consistency.
    if (w.cycle > 0.0) {
        const Tensor cyc_s = g_rs_->forward(fake_r, ctx_cyc_s, true, &rng_);
        const Tensor cyc_r = g_sr_->forward(fake_s, ctx_cyc_r, true, &rng_);
        report.cycle = losses::cycle_loss_t(batch.sim, cyc_s, batch.real, cyc_r);

        Tensor g_cyc_s(cyc_s.n, cyc_s.c, cyc_s.h, cyc_s.w);
        losses::l1_mean_grad<float>(losses::flat(cyc_s), losses::flat(batch.sim),
                                    static_cast<float>(w.cycle), g_cyc_s.data());
        Tensor back = g_rs_->backward(g_cyc_s, ctx_cyc_s, true);
        kernels::add(g_fake_r.size(), g_fake_r.data(), back.data(), g_fake_r.data());

        Tensor g_cyc_r(cyc_r.n, cyc_r.c, cyc_r.h, cyc_r.w);
        losses::l1_mean_grad<float>(losses::flat(cyc_r), losses::flat(batch.real),
                                    static_cast<float>(w.cycle), g_cyc_r.data());
        back = g_sr_->backward(g_cyc_r, ctx_cyc_r, true);
        kernels::add(g_fake_s.size(), g_fake_s.data(), back.data(), g_fake_s.data());
    }

    // Identity mapping.
    if (w.identity > 0.0) {
        const Tensor id_s = g_rs_->forward(batch.sim, ctx_id_s, true, &rng_);
        const Tensor id_r = g_sr_->forward(batch.real, ctx_id_r, true, &rng_);
        report.identity = losses::identity_loss_t(batch.sim, id_s, batch.real, id_r);

        Tensor g_id_s(id_s.n, id_s.c, id_s.h, id_s.w);
        losses::l1_mean_grad<float>(losses::flat(id_s), losses::flat(batch.sim),
                                    static_cast<float>(w.identity), g_id_s.data());
        g_rs_->backward(g_id_s, ctx_id_s, true);

        Tensor g_id_r(id_r.n, id_r.c, id_r.h, id_r.w);
        losses::l1_mean_grad<float>(losses::flat(id_r), losses::flat(batch.real),
                                    static_cast<float>(w.identity), g_id_r.data());
        g_sr_->backward(g_id_r, ctx_id_r, true);
    }

    // Background constraint on the adapted image.
    if (w.mask > 0.0) {
        const Tensor* xr = nullptr;
        if (w.alpha < 1.0) {
            if (!batch.paired_real)
                throw ConfigError("mask loss with alpha < 1 requires paired real images");
            xr = &*batch.paired_real;
        }
        report.mask = losses::mask_loss_t(fake_r, batch.sim, xr, batch.mask, w.alpha);
        losses::mask_loss_grad_t(fake_r, batch.sim, xr, batch.mask, w.alpha,
                                 static_cast<float>(w.mask), g_fake_r);
    }

    g_sr_->backward(g_fake_r, ctx_fake_r, true);
    g_rs_->backward(g_fake_s, ctx_fake_s, true);
    opt_g_->step(lr);
}

void Trainer::discriminator_update(const Batch& batch, const Tensor& fake_r_now,
                                   const Tensor& fake_s_now, double lr, LossReport& report) {
    const auto& w = cfg_.weights;
    if (w.gan <= 0.0) return;
    const AdvMode mode = losses::adv_mode_from_string(cfg_.adv_mode);
    nn::zero_grads(params_d_);

    auto update = [&](nn::PatchDiscriminator& d, const Tensor& real, const Tensor& fake_now,
                      ImageBuffer& buffer) {
        std::vector<Tensor> pooled;
        for (int b = 0; b < fake_now.n; ++b)
            pooled.push_back(buffer.query(slice_sample(fake_now, b), rng_));
        Tensor fakes = stack(pooled);

        nn::Ctx ctx_real, ctx_fake;
        const Tensor d_real = d.forward(real, ctx_real, true, &rng_);
        const Tensor d_fake = d.forward(fakes, ctx_fake, true, &rng_);
        const auto adv =
            losses::adversarial_loss<float>(losses::flat(d_real), losses::flat(d_fake), mode);

        Tensor g_real(d_real.n, d_real.c, d_real.h, d_real.w);
        Tensor g_fake(d_fake.n, d_fake.c, d_fake.h, d_fake.w);
        losses::adversarial_loss_grads<float>(losses::flat(d_real), losses::flat(d_fake), mode,
                                              g_real.data(), g_fake.data(), nullptr);
        kernels::scale(g_real.size(), static_cast<float>(w.gan), g_real.data());
        kernels::scale(g_fake.size(), static_cast<float>(w.gan), g_fake.data());
        d.backward(g_real, ctx_real, true);
        d.backward(g_fake, ctx_fake, true);
        return adv.loss_d;
    };

    report.gan_d = update(*d_r_, batch.real, fake_r_now, buffer_r_);
    report.gan_d += update(*d_s_, batch.sim, fake_s_now, buffer_s_);
    opt_d_->step(lr);
}

LossReport Trainer::train_step(const Batch& batch) {
    const double lr = lr_for_epoch(epoch_);
    LossReport report;
    Tensor fake_r, fake_s;
    generator_update(batch, lr, report, fake_r, fake_s);
    discriminator_update(batch, fake_r, fake_s, lr, report);
    report.total = losses::total_objective(report, cfg_.weights).generator_total;
    if (!report.all_finite()) {
        std::string term = !std::isfinite(report.gan_g)      ? "gan_g"
                           : !std::isfinite(report.gan_d)    ? "gan_d"
                           : !std::isfinite(report.cycle)    ? "cycle"
                           : !std::isfinite(report.identity) ? "identity"
                                                             : "mask";
        throw NumericError("non-finite loss term '" + term + "' at step " +
                           std::to_string(step_));
    }
    ++step_;
    return report;
}

std::filesystem::path Trainer::run(const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    fs::create_directories(out_dir / "checkpoints");
    {
        std::ofstream cfg_out(out_dir / "config.json");
        cfg_out << cfg_.to_json().dump(2) << "\n";
    }
    const bool fresh = step_ == 0;
    std::ofstream log_out(out_dir / "log.csv", fresh ? std::ios::trunc : std::ios::app);
    if (fresh) log_out << "step,epoch,gan_g,gan_d,cycle,identity,mask,total\n";

    const int spe = steps_per_epoch();
    const long long cap = cfg_.max_steps > 0 ? cfg_.max_steps
                                             : static_cast<long long>(cfg_.epochs) * spe;
    fs::path last_ckpt;
    bool done = step_ >= cap;
    for (int epoch = epoch_; epoch < cfg_.epochs && !done; ++epoch) {
        epoch_ = epoch;
        for (int s = static_cast<int>(step_ % spe); s < spe; ++s) {
            const LossReport r = train_step(make_batch(epoch, s));
            log_.push_back(r);
            log_out << step_ - 1 << ',' << epoch << ',' << r.gan_g << ',' << r.gan_d << ','
                    << r.cycle << ',' << r.identity << ',' << r.mask << ',' << r.total << '\n';
            if (cfg_.checkpoint_every > 0 && step_ % cfg_.checkpoint_every == 0) {
                last_ckpt = out_dir / "checkpoints" /
                            ("step_" + std::to_string(step_) + ".tgcp");
                save_checkpoint(last_ckpt);
            }
            if (step_ >= cap) {
                done = true;
                break;
            }
        }
        if (!done) {
            epoch_ = epoch + 1;  // next epoch for resume purposes
            last_ckpt = out_dir / "checkpoints" / ("epoch_" + std::to_string(epoch) + ".tgcp");
            save_checkpoint(last_ckpt);
        }
    }
    const fs::path final_path = out_dir / "checkpoints" / "final.tgcp";
    save_checkpoint(final_path);
    log_out.flush();
    return final_path;
}

void Trainer::save_checkpoint(const std::filesystem::path& path) const {
    nlohmann::json header;
    header["kind"] = "tacgap-train";
    header["config"] = cfg_.to_json();
    header["config_hash"] = cfg_.hash();
    header["epoch"] = epoch_;
    header["step"] = step_;
    header["rng"] = {rng_.state(), rng_.inc()};
    header["adam_t"] = {opt_g_->t(), opt_d_->t()};
    header["buffer_sizes"] = {buffer_r_.items().size(), buffer_s_.items().size()};

    std::vector<std::pair<std::string, const Tensor*>> tensors;
    for (const nn::Param* p : params_g_) tensors.emplace_back(p->name, &p->value);
    for (const nn::Param* p : params_d_) tensors.emplace_back(p->name, &p->value);
    auto& og = *const_cast<nn::Adam*>(opt_g_.get());
    auto& od = *const_cast<nn::Adam*>(opt_d_.get());
    for (std::size_t i = 0; i < params_g_.size(); ++i) {
        tensors.emplace_back("opt_g.m." + params_g_[i]->name, &og.moment1(i));
        tensors.emplace_back("opt_g.v." + params_g_[i]->name, &og.moment2(i));
    }
    for (std::size_t i = 0; i < params_d_.size(); ++i) {
        tensors.emplace_back("opt_d.m." + params_d_[i]->name, &od.moment1(i));
        tensors.emplace_back("opt_d.v." + params_d_[i]->name, &od.moment2(i));
    }
    for (std::size_t i = 0; i < buffer_r_.items().size(); ++i)
        tensors.emplace_back("buffer_r." + std::to_string(i), &buffer_r_.items()[i]);
    for (std::size_t i = 0; i < buffer_s_.items().size(); ++i)
        tensors.emplace_back("buffer_s." + std::to_string(i), &buffer_s_.items()[i]);
    nn::save_container(path, header, tensors);
}

std::unique_ptr<Trainer> Trainer::restore(const std::filesystem::path& path,
                                          const std::string& override_manifest) {
    nn::Container c = nn::load_container(path);
    if (c.header.value("kind", "") != "tacgap-train")
        throw DataError("not a training checkpoint: " + path.string());
    util::TrainConfig cfg = util::TrainConfig::from_json(c.header.at("config"));
    if (c.header.at("config_hash").get<std::uint64_t>() != cfg.hash())
        throw DataError("checkpoint refused: config hash mismatch in " + path.string());
    if (!override_manifest.empty()) cfg.manifest = override_manifest;

    auto manifest = data::DatasetManifest::load(cfg.manifest);
    auto trainer = std::make_unique<Trainer>(cfg, manifest);
    trainer->epoch_ = c.header.at("epoch").get<int>();
    trainer->step_ = c.header.at("step").get<long long>();
    trainer->rng_.set_state(c.header.at("rng")[0].get<std::uint64_t>(),
                            c.header.at("rng")[1].get<std::uint64_t>());
    trainer->opt_g_->set_t(c.header.at("adam_t")[0].get<long long>());
    trainer->opt_d_->set_t(c.header.at("adam_t")[1].get<long long>());

    auto load_params = [&](std::vector<nn::Param*>& params, nn::Adam& opt) {
        for (std::size_t i = 0; i < params.size(); ++i) {
            const Tensor* v = c.find(params[i]->name);
            const Tensor* m = c.find("opt_" + std::string(&opt == trainer->opt_g_.get() ? "g" : "d") +
                                     ".m." + params[i]->name);
            const Tensor* mv = c.find("opt_" + std::string(&opt == trainer->opt_g_.get() ? "g" : "d") +
                                      ".v." + params[i]->name);
            if (!v || !m || !mv)
                throw DataError("checkpoint missing tensor '" + params[i]->name + "'");
            if (!v->same_shape(params[i]->value))
                throw DataError("checkpoint tensor shape mismatch for '" + params[i]->name + "'");
            params[i]->value = *v;
            opt.moment1(i) = *m;
            opt.moment2(i) = *mv;
        }
    };
    load_params(trainer->params_g_, *trainer->opt_g_);
    load_params(trainer->params_d_, *trainer->opt_d_);

    const auto sizes = c.header.at("buffer_sizes");
    std::vector<Tensor> br, bs;
    for (std::size_t i = 0; i < sizes[0].get<std::size_t>(); ++i)
        br.push_back(*c.find("buffer_r." + std::to_string(i)));
    for (std::size_t i = 0; i < sizes[1].get<std::size_t>(); ++i)
        bs.push_back(*c.find("buffer_s." + std::to_string(i)));
    trainer->buffer_r_.set_items(std::move(br));
    trainer->buffer_s_.set_items(std::move(bs));
    return trainer;
}

Tensor Trainer::adapt(const Tensor& sim) {
    nn::UNetCtx ctx;
    return g_sr_->forward(sim, ctx, false, nullptr);
}

}  // namespace tacgap::train
