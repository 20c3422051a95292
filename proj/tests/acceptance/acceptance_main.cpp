// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Heavier end-to-end criteria run last.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "tacgap/classify/experiment.hpp"
#include "tacgap/data/augment.hpp"
#include "tacgap/data/dataset.hpp"
#include "tacgap/eval/evaluate.hpp"
#include "tacgap/losses.hpp"
#include "tacgap/nn/models.hpp"
#include "tacgap/train/trainer.hpp"

using namespace tacgap;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::vector<double> random_vec(std::size_t n, Rng& rng, double lo = -2.0, double hi = 2.0) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

bool rel_close(double got, double expect, double tol) {
    return std::abs(got - expect) <= tol * std::max({1.0, std::abs(got), std::abs(expect)});
}

// ---------------------------------------------------------------- C1

Outcome loss_oracle_equivalence() {
    Rng rng(2024);
    int checked = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 2 * 4 * 4;
        const auto zr = random_vec(n, rng, -3.0, 3.0);
        const auto zf = random_vec(n, rng, -3.0, 3.0);

        // scalar recomputation, straight from the formulas
        double log_d = 0.0, log_g = 0.0, ls_d = 0.0, ls_g = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sr = 1.0 / (1.0 + std::exp(-zr[i]));
            const double sf = 1.0 / (1.0 + std::exp(-zf[i]));
            log_d += -std::log(sr) / n - std::log(1.0 - sf) / n;
            log_g += -std::log(sf) / n;
            ls_d += (zr[i] - 1.0) * (zr[i] - 1.0) / n + zf[i] * zf[i] / n;
            ls_g += (zf[i] - 1.0) * (zf[i] - 1.0) / n;
        }
        const auto got_log = losses::adversarial_loss<double>(zr, zf, losses::AdvMode::log_loss);
        const auto got_ls =
            losses::adversarial_loss<double>(zr, zf, losses::AdvMode::least_squares);
        if (!rel_close(got_log.loss_d, log_d, 1e-6) || !rel_close(got_log.loss_g, log_g, 1e-6) ||
            !rel_close(got_ls.loss_d, ls_d, 1e-6) || !rel_close(got_ls.loss_g, ls_g, 1e-6))
            return {false, "adversarial mismatch at case " + std::to_string(rep)};

        // cycle / identity oracle
        const auto xs = random_vec(n, rng), cs = random_vec(n, rng);
        const auto xr = random_vec(n, rng), cr = random_vec(n, rng);
        double cyc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            cyc += std::abs(xs[i] - cs[i]) / n + std::abs(xr[i] - cr[i]) / n;
        if (!rel_close(losses::cycle_loss<double>(xs, cs, xr, cr), cyc, 1e-6))
            return {false, "cycle mismatch at case " + std::to_string(rep)};
        if (!rel_close(losses::identity_loss<double>(xs, cs, xr, cr), cyc, 1e-6))
            return {false, "identity mismatch at case " + std::to_string(rep)};

        // mask oracle: 2 channels over a 4x4 plane
        const std::size_t plane = 16;
        const auto a = random_vec(2 * plane, rng), s = random_vec(2 * plane, rng),
                   r = random_vec(2 * plane, rng);
        std::vector<double> m(plane);
        for (double& x : m) x = rng.bernoulli(0.4) ? 1.0 : 0.0;
        const double alpha = rng.uniform();
        double mask_expect = 0.0;
        for (int c = 0; c < 2; ++c)
            for (std::size_t p = 0; p < plane; ++p)
                mask_expect += (alpha * std::abs(a[c * plane + p] - s[c * plane + p]) +
                                (1 - alpha) * std::abs(a[c * plane + p] - r[c * plane + p])) *
                               (1.0 - m[p]) / (2 * plane);
        if (!rel_close(losses::mask_loss<double>(a, s, r, m, 2, alpha), mask_expect, 1e-6))
            return {false, "mask mismatch at case " + std::to_string(rep)};
        ++checked;
    }
    return {true, std::to_string(checked) + " randomized cases, rel err <= 1e-6"};
}

// ---------------------------------------------------------------- C2

Outcome loss_gradient_checks() {
    Rng rng(2025);
    const std::size_t n = 4 * 4 * 3;
    const double eps = 1e-4, tol = 1e-3;
    double worst = 0.0;
    auto check = [&](double fd, double analytic) {
        const double rel =
            std::abs(fd - analytic) / std::max({1e-9, std::abs(fd), std::abs(analytic)});
        worst = std::max(worst, rel);
        return rel < tol;
    };

    for (losses::AdvMode mode : {losses::AdvMode::log_loss, losses::AdvMode::least_squares}) {
        auto zr = random_vec(n, rng), zf = random_vec(n, rng);
        std::vector<double> grd(n), gfd(n), gfg(n);
        losses::adversarial_loss_grads<double>(zr, zf, mode, grd.data(), gfd.data(), gfg.data());
        for (std::size_t i = 0; i < n; i += 3) {
            auto d_loss = [&](std::vector<double>& v, double delta, bool want_d) {
                v[i] += delta;
                const auto r = losses::adversarial_loss<double>(zr, zf, mode);
                v[i] -= delta;
                return want_d ? r.loss_d : r.loss_g;
            };
            if (!check((d_loss(zr, eps, true) - d_loss(zr, -eps, true)) / (2 * eps), grd[i]))
                return {false, "adversarial d_real gradient"};
            if (!check((d_loss(zf, eps, true) - d_loss(zf, -eps, true)) / (2 * eps), gfd[i]))
                return {false, "adversarial d_fake gradient"};
            if (!check((d_loss(zf, eps, false) - d_loss(zf, -eps, false)) / (2 * eps), gfg[i]))
                return {false, "generator adversarial gradient"};
        }
    }

    // cycle / identity: gradient w.r.t. the generated image is the L1 term
    {
        auto xs = random_vec(n, rng), cs = random_vec(n, rng);
        auto xr = random_vec(n, rng), cr = random_vec(n, rng);
        std::vector<double> g(n, 0.0);
        losses::l1_mean_grad<double>(cs, xs, 1.0, g.data());
        for (std::size_t i = 0; i < n; i += 5) {
            cs[i] += eps;
            const double up = losses::cycle_loss<double>(xs, cs, xr, cr);
            cs[i] -= 2 * eps;
            const double dn = losses::cycle_loss<double>(xs, cs, xr, cr);
            cs[i] += eps;
            if (!check((up - dn) / (2 * eps), g[i])) return {false, "cycle gradient"};
        }
        std::vector<double> gi(n, 0.0);
        losses::l1_mean_grad<double>(cr, xr, 1.0, gi.data());
        for (std::size_t i = 1; i < n; i += 5) {
            cr[i] += eps;
            const double up = losses::identity_loss<double>(xs, cs, xr, cr);
            cr[i] -= 2 * eps;
            const double dn = losses::identity_loss<double>(xs, cs, xr, cr);
            cr[i] += eps;
            if (!check((up - dn) / (2 * eps), gi[i])) return {false, "identity gradient"};
        }
    }

    // mask loss
    {
        const std::size_t plane = 16;
        auto a = random_vec(3 * plane, rng);
        const auto s = random_vec(3 * plane, rng), r = random_vec(3 * plane, rng);
        std::vector<double> m(plane);
        for (double& x : m) x = rng.bernoulli(0.5) ? 1.0 : 0.0;
        const double alpha = 0.35;
        std::vector<double> g(3 * plane, 0.0);
        losses::mask_loss_grad<double>(a, s, r, m, 3, alpha, 1.0, g.data());
        for (std::size_t i = 0; i < a.size(); i += 7) {
            a[i] += eps;
            const double up = losses::mask_loss<double>(a, s, r, m, 3, alpha);
            a[i] -= 2 * eps;
            const double dn = losses::mask_loss<double>(a, s, r, m, 3, alpha);
            a[i] += eps;
            if (!check((up - dn) / (2 * eps), g[i])) return {false, "mask gradient"};
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "max rel err %.2e (tol 1e-3)", worst);
    return {true, buf};
}

// ---------------------------------------------------------------- C3

Outcome mask_loss_semantics() {
    Rng rng(2026);
    double max_dev = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t plane = 25;
        auto a = random_vec(3 * plane, rng);
        const auto s = random_vec(3 * plane, rng), r = random_vec(3 * plane, rng);
        std::vector<double> m(plane);
        bool has_contact = false;
        for (double& x : m) {
            x = rng.bernoulli(0.5) ? 1.0 : 0.0;
            has_contact |= x == 1.0;
        }
        if (!has_contact) m[0] = 1.0;

        // locality: contact-pixel perturbations change the loss by exactly 0
        const double alpha = rng.uniform();
        const double before = losses::mask_loss<double>(a, s, r, m, 3, alpha);
        auto perturbed = a;
        for (std::size_t p = 0; p < plane; ++p)
            if (m[p] == 1.0)
                for (int c = 0; c < 3; ++c) perturbed[c * plane + p] += rng.uniform(-10.0, 10.0);
        const double after = losses::mask_loss<double>(perturbed, s, r, m, 3, alpha);
        if (after != before) return {false, "locality violated (nonzero change)"};

        // affinity in alpha against the two-endpoint interpolation
        const double at0 = losses::mask_loss<double>(a, s, r, m, 3, 0.0);
        const double at1 = losses::mask_loss<double>(a, s, r, m, 3, 1.0);
        for (double q : {0.2, 0.5, 0.77}) {
            const double got = losses::mask_loss<double>(a, s, r, m, 3, q);
            max_dev = std::max(max_dev, std::abs(got - (q * at1 + (1 - q) * at0)));
        }
    }
    if (max_dev > 1e-7) return {false, "affinity deviation " + std::to_string(max_dev)};
    char buf[64];
    std::snprintf(buf, sizeof buf, "locality exact, affinity dev %.1e <= 1e-7", max_dev);
    return {true, buf};
}

// ---------------------------------------------------------------- C4

Outcome architecture_contracts() {
    // generator: 256x256 must bottleneck at 1x1x512 and emit values in [-1,1]
    nn::GeneratorSpec gs;
    gs.input_size = 256;
    nn::UNetGenerator g(gs);
    Rng rng(2027);
    auto params = g.params("g");
    nn::init_weights(params, nn::InitScheme::normal002, rng);
    const auto filters = gs.encoder_filters();
    if (filters.back() != 512 || gs.depth() != 8) return {false, "encoder progression wrong"};

    Tensor x(1, 3, 256, 256);
    for (float& v : x.v) v = static_cast<float>(rng.uniform(-1.0, 1.0));
    nn::UNetCtx ctx;
    const Tensor y = g.forward(x, ctx, false, nullptr);
    const Tensor& bottleneck = ctx.enc.back().kids[1].saved[0];  // instance-norm input
    if (bottleneck.c != 512 || bottleneck.h != 1 || bottleneck.w != 1)
        return {false, "bottleneck is " + bottleneck.shape_str() + ", want 1x1x512"};
    if (!y.same_shape(x)) return {false, "generator changed the image shape"};
    for (float v : y.v)
        if (v < -1.0f || v > 1.0f) return {false, "generator output outside [-1, 1]"};

    // discriminator: patch grid matches the conv-arithmetic oracle
    for (int size : {64, 128, 256}) {
        nn::DiscriminatorSpec ds;
        ds.input_size = size;
        ds.base_filters = 8;
        int expect = size;
        for (const auto& [k, s, p] : ds.conv_arith()) expect = (expect + 2 * p - k) / s + 1;
        nn::PatchDiscriminator d(ds);
        auto dp = d.params("d");
        nn::init_weights(dp, nn::InitScheme::normal002, rng);
        Tensor xi(1, 3, size, size);
        for (float& v : xi.v) v = static_cast<float>(rng.uniform(-1.0, 1.0));
        nn::Ctx dctx;
        const Tensor logits = d.forward(xi, dctx, false, nullptr);
        if (logits.h != expect || logits.w != expect || logits.c != 1)
            return {false, "patch grid mismatch at input " + std::to_string(size)};
    }
    return {true, "1x1x512 bottleneck at 256; patch grids match conv arithmetic at 64/128/256"};
}

// ---------------------------------------------------------------- C5

Outcome mask_construction() {
    Rng rng(2028);
    data::SensorGeometry geo;
    const int res = 96;
    for (int trial = 0; trial < 20; ++trial) {
        data::IndenterSpec ind;
        ind.shape = data::IndenterShape::sphere;
        ind.radius = rng.uniform(1.5e-3, 4.0e-3);
        const double tap = rng.uniform(2.0e-4, 1.2e-3);
        const auto depth = data::synth_depth_map(ind, tap, res, res, geo);
        const auto m = mask::mask_from_depth(depth, geo.elastomer_depth);
        const double rho = data::contact_radius(ind, tap) / geo.pixel_pitch(res);
        double area = 0.0;
        for (auto v : m.values) area += v;
        const double expect = 3.14159265358979323846 * rho * rho;
        const double band = 2.0 * 3.14159265358979323846 * rho + 4.0;
        if (std::abs(area - expect) > band)
            return {false,
                    "disc area off by more than a 1-px band at trial " + std::to_string(trial)};
    }
    // threshold strictness at exact equality
    data::DepthMap flat;
    flat.height = flat.width = 8;
    flat.values.assign(64, 0.004f);
    const auto m = mask::mask_from_depth(flat, 0.004);
    for (auto v : m.values)
        if (v != 0) return {false, "exact-equality depth classified as contact"};
    return {true, "20 random sphere taps within a 1-px perimeter band; strict threshold"};
}

// ---------------------------------------------------------------- C6 / C7

constexpr int kDeskSeeds = 5;
constexpr int kDeskEpochs = 3;  // 160 steps/epoch at 200 pairs -> 480 steps/seed

struct DeskArtifacts {
    fs::path dataset_dir;
    data::DatasetManifest manifest;
    fs::path best_checkpoint;
    bool have_checkpoint = false;
};

util::TrainConfig desk_config(const DeskArtifacts& desk, std::uint64_t seed) {
    util::TrainConfig cfg;
    cfg.manifest = (desk.dataset_dir / "manifest.json").string();
    cfg.resolution = 64;
    cfg.model.gen_base_filters = 16;
    cfg.model.disc_base_filters = 16;
    cfg.weights = losses::LossWeights{1.0, 10.0, 0.0, 10.0, 1.0};  // alpha = 1 ("Mask Sim")
    cfg.epochs = kDeskEpochs;
    cfg.seed = seed;
    cfg.buffer_size = 50;
    cfg.augment_enabled = true;
    return cfg;
}

Outcome desk_scale_end_to_end(DeskArtifacts& desk) {
    data::SynthDatasetConfig dcfg;
    dcfg.classes = 4;
    dcfg.count = 200;
    dcfg.resolution = 64;
    dcfg.seed = 424242;
    desk.dataset_dir = fs::temp_directory_path() / "tacgap_acceptance_desk";
    fs::remove_all(desk.dataset_dir);
    desk.manifest = data::write_synth_dataset(desk.dataset_dir, dcfg);

    std::vector<data::SamplePair> heldout;
    for (const auto& ref : desk.manifest.split("test"))
        heldout.push_back(data::load_sample(desk.manifest, ref));

    int passes = 0;
    std::string per_seed;
    double best_mae = 1e9;
    for (int s = 0; s < kDeskSeeds; ++s) {
        train::Trainer trainer(desk_config(desk, 1000 + s), desk.manifest);
        const fs::path run_dir = desk.dataset_dir / ("run_" + std::to_string(s));
        const fs::path ckpt = trainer.run(run_dir);

        double leak = 0.0, change = 0.0, mae_adapted = 0.0, mae_sim = 0.0;
        for (const auto& pair : heldout) {
            const Tensor adapted = trainer.adapt(pair.sim);
            leak += eval::texture_leak(adapted, pair.sim, pair.mask);
            change += eval::contact_change(adapted, pair.sim, pair.mask);
            mae_adapted += eval::mae_percent(adapted, *pair.real);
            mae_sim += eval::mae_percent(pair.sim, *pair.real);
        }
        const double n = static_cast<double>(heldout.size());
        leak /= n;
        change /= n;
        mae_adapted /= n;
        mae_sim /= n;

        const bool leak_ok = leak <= 0.25 * change;
        const bool mae_ok = mae_adapted < mae_sim;
        if (leak_ok && mae_ok) {
            ++passes;
            if (mae_adapted < best_mae) {
                best_mae = mae_adapted;
                desk.best_checkpoint = ckpt;
                desk.have_checkpoint = true;
            }
        }
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "\n    seed %d: leak %.4f vs 0.25*change %.4f (%s), MAE adapted %.2f%% vs "
                      "sim %.2f%% (%s)",
                      s, leak, 0.25 * change, leak_ok ? "ok" : "FAIL", mae_adapted, mae_sim,
                      mae_ok ? "ok" : "FAIL");
        per_seed += buf;
    }
    const bool pass = passes >= 4;
    return {pass, std::to_string(passes) + "/" + std::to_string(kDeskSeeds) +
                      " seeds pass both (need >= 4)" + per_seed};
}

Outcome desk_scale_classification(const DeskArtifacts& desk) {
    if (!desk.have_checkpoint)
        return {false, "no trained generator available from the end-to-end criterion"};
    util::ClassifierConfig cfg;
    cfg.epochs = 30;
    cfg.repeats = 3;
    cfg.batch_size = 16;
    cfg.seed_base = 71;

    auto g = train::load_generator(desk.best_checkpoint);
    const auto sim_res =
        cls::sim2real_experiment(cls::TrainSource::sim, desk.manifest, nullptr, cfg);
    const auto adp_res =
        cls::sim2real_experiment(cls::TrainSource::adapted, desk.manifest, g.get(), cfg);

    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "real acc: adapted-trained %.2f%% (+-%.2f) vs sim-trained %.2f%% (+-%.2f); "
                  "source acc %.2f%% / %.2f%%",
                  adp_res.mean_real, adp_res.std_real, sim_res.mean_real, sim_res.std_real,
                  adp_res.mean_source, sim_res.mean_source);
    return {adp_res.mean_real >= sim_res.mean_real, buf};
}

// ---------------------------------------------------------------- C8

Outcome metric_validation() {
    Rng rng(2029);
    Tensor x(1, 3, 24, 24);
    for (float& v : x.v) v = static_cast<float>(rng.uniform(-1.0, 1.0));
    if (eval::ssim(x, x) != 1.0) return {false, "ssim(x,x) != 1 exactly"};
    if (eval::mae_percent(x, x) != 0.0) return {false, "mae(x,x) != 0 exactly"};

    Tensor zero(1, 3, 16, 16, -1.0f);  // unit-space 0
    Tensor t105(1, 3, 16, 16, static_cast<float>(0.105 * 2.0 - 1.0));
    const double mae = eval::mae_percent(zero, t105);
    if (!rel_close(mae, 10.50, 1e-5))
        return {false, "mae scale check off: " + std::to_string(mae)};
    char buf[96];
    std::snprintf(buf, sizeof buf, "ssim(x,x)=1, mae(x,x)=0, mae(0,0.105)=%.6f%%", mae);
    return {true, buf};
}

// ---------------------------------------------------------------- C9

Outcome determinism() {
    const fs::path dir = fs::temp_directory_path() / "tacgap_acceptance_det";
    fs::remove_all(dir);
    data::SynthDatasetConfig dcfg;
    dcfg.classes = 2;
    dcfg.count = 8;
    dcfg.resolution = 16;
    dcfg.seed = 5;
    const auto manifest = data::write_synth_dataset(dir / "data", dcfg);

    util::TrainConfig cfg;
    cfg.manifest = (dir / "data" / "manifest.json").string();
    cfg.resolution = 16;
    cfg.model.gen_base_filters = 4;
    cfg.model.disc_base_filters = 4;
    cfg.model.disc_layers = 2;
    cfg.epochs = 2;
    cfg.seed = 13;
    cfg.buffer_size = 4;
    cfg.augment.crop_size = 16;

    auto read_log = [](const fs::path& p) {
        std::ifstream in(p);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    train::Trainer a(cfg, manifest);
    a.run(dir / "run_a");
    train::Trainer b(cfg, manifest);
    b.run(dir / "run_b");
    if (read_log(dir / "run_a" / "log.csv") != read_log(dir / "run_b" / "log.csv"))
        return {false, "identical config/seed produced different loss logs"};

    // resume must match the uninterrupted run step for step
    train::Trainer full(cfg, manifest);
    std::vector<losses::LossReport> full_log;
    const int spe = full.steps_per_epoch();
    for (int s = 0; s < spe; ++s) full_log.push_back(full.train_step(full.make_batch(0, s)));
    for (int s = 0; s < 2; ++s) full_log.push_back(full.train_step(full.make_batch(1, s)));

    train::Trainer half(cfg, manifest);
    for (int s = 0; s < spe - 1; ++s) half.train_step(half.make_batch(0, s));
    const fs::path ckpt = dir / "resume.tgcp";
    half.save_checkpoint(ckpt);
    auto resumed = train::Trainer::restore(ckpt);
    std::vector<losses::LossReport> tail;
    tail.push_back(resumed->train_step(resumed->make_batch(0, spe - 1)));
    tail.push_back(resumed->train_step(resumed->make_batch(1, 0)));
    tail.push_back(resumed->train_step(resumed->make_batch(1, 1)));
    double worst = 0.0;
    for (std::size_t i = 0; i < tail.size(); ++i) {
        worst = std::max(worst, std::abs(tail[i].total - full_log[spe - 1 + i].total));
        worst = std::max(worst, std::abs(tail[i].gan_d - full_log[spe - 1 + i].gan_d));
    }
    fs::remove_all(dir);
    if (worst > 1e-6)
        return {false, "resumed run deviates by " + std::to_string(worst) + " per step"};
    char buf[96];
    std::snprintf(buf, sizeof buf, "identical logs; resume deviation %.2e <= 1e-6", worst);
    return {true, buf};
}

}  // namespace

int main() {
    DeskArtifacts desk;
    struct Criterion {
        const char* name;
        std::function<Outcome()> fn;
    };
    const std::vector<Criterion> criteria = {
        {"loss oracle equivalence", loss_oracle_equivalence},
        {"loss gradient checks", loss_gradient_checks},
        {"mask-loss semantics (locality, alpha-affinity)", mask_loss_semantics},
        {"architecture contracts", architecture_contracts},
        {"mask construction vs analytic contact disc", mask_construction},
        {"metric validation", metric_validation},
        {"determinism and checkpoint resume", determinism},
        {"desk-scale end-to-end adaptation", [&] { return desk_scale_end_to_end(desk); }},
        {"desk-scale sim2real classification", [&] { return desk_scale_classification(desk); }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", c.name, secs,
                    o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    if (!desk.dataset_dir.empty()) fs::remove_all(desk.dataset_dir);
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
                criteria.size());
    return failed == 0 ? 0 : 1;
}
