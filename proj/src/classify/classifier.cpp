#include "tacgap/classify/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "tacgap/errors.hpp"
#include "tacgap/nn/models.hpp"

namespace tacgap::cls {

Classifier::Classifier(const util::ClassifierConfig& cfg, int classes, int input_size, Rng& rng)
    : classes_(classes) {
    cfg.validate();
    if (classes < 2) throw ConfigError("classifier needs at least 2 classes");
    if (input_size < 16) throw ConfigError("classifier input must be at least 16x16");

    // 4-block conv backbone, stride 2 each.
    const int widths[4] = {16, 32, 64, 128};
    int cin = 3, size = input_size;
    for (int i = 0; i < 4; ++i) {
        net_.emplace<nn::Conv2d>(cin, widths[i], 3, 2, 1, true);
        net_.emplace<nn::Activation>(nn::Act::relu);
        cin = widths[i];
        size = (size + 1) / 2;
    }
    net_.emplace<nn::Flatten>();
    const int feat = cin * size * size;
    net_.emplace<nn::Linear>(feat, cfg.head_units1);
    net_.emplace<nn::BatchNorm>(cfg.head_units1);
    net_.emplace<nn::Activation>(nn::Act::elu);
    net_.emplace<nn::Linear>(cfg.head_units1, cfg.head_units2);
    net_.emplace<nn::BatchNorm>(cfg.head_units2);
    net_.emplace<nn::Activation>(nn::Act::elu);
    net_.emplace<nn::Linear>(cfg.head_units2, classes);

    net_.collect_params("classifier", params_);
    nn::init_weights(params_, nn::InitScheme::he, rng);
}

Tensor Classifier::logits(const Tensor& images, bool train, Rng* rng, nn::Ctx& ctx) {
    return net_.forward(images, ctx, train, rng);
}

Tensor Classifier::predict_proba(const Tensor& images) {
    nn::Ctx ctx;
    Tensor z = logits(images, false, nullptr, ctx);
    for (int b = 0; b < z.n; ++b) {
        float* row = z.data() + static_cast<std::size_t>(b) * classes_;
        float mx = row[0];
        for (int k = 1; k < classes_; ++k) mx = std::max(mx, row[k]);
        double sum = 0.0;
        for (int k = 0; k < classes_; ++k) {
            row[k] = std::exp(row[k] - mx);
            sum += row[k];
        }
        for (int k = 0; k < classes_; ++k) row[k] = static_cast<float>(row[k] / sum);
    }
    return z;
}

std::vector<int> Classifier::predict(const Tensor& images) {
    nn::Ctx ctx;
    const Tensor z = logits(images, false, nullptr, ctx);
    std::vector<int> out(z.n);
    for (int b = 0; b < z.n; ++b) {
        const float* row = z.data() + static_cast<std::size_t>(b) * classes_;
        out[b] = static_cast<int>(std::max_element(row, row + classes_) - row);
    }
    return out;
}

double softmax_xent(const Tensor& logits, const std::vector<int>& labels, Tensor* glogits) {
    const int n = logits.n, k = logits.c;
    if (static_cast<int>(labels.size()) != n)
        throw NumericError("softmax_xent: label count does not match batch");
    double loss = 0.0;
    if (glogits) *glogits = Tensor(n, k, 1, 1);
    for (int b = 0; b < n; ++b) {
        const float* row = logits.data() + static_cast<std::size_t>(b) * k;
        float mx = row[0];
        for (int i = 1; i < k; ++i) mx = std::max(mx, row[i]);
        double sum = 0.0;
        for (int i = 0; i < k; ++i) sum += std::exp(static_cast<double>(row[i]) - mx);
        const double logsum = std::log(sum) + mx;
        loss += logsum - row[labels[b]];
        if (glogits) {
            float* g = glogits->data() + static_cast<std::size_t>(b) * k;
            for (int i = 0; i < k; ++i) {
                const double p = std::exp(static_cast<double>(row[i]) - logsum);
                g[i] = static_cast<float>((p - (i == labels[b] ? 1.0 : 0.0)) / n);
            }
        }
    }
    return loss / n;
}

namespace {
Tensor stack_subset(const std::vector<Tensor>& images, const std::vector<int>& order, int from,
                    int count) {
    const Tensor& first = images[order[from]];
    Tensor out(count, first.c, first.h, first.w);
    const std::size_t one = first.size();
    for (int i = 0; i < count; ++i)
        std::memcpy(out.data() + static_cast<std::size_t>(i) * one, images[order[from + i]].data(),
                    one * sizeof(float));
    return out;
}
}  // namespace

TrainLog train_classifier(Classifier& clf, const std::vector<Tensor>& images,
                          const std::vector<int>& labels, const util::ClassifierConfig& cfg,
                          Rng& rng) {
    if (images.empty()) throw DataError("train_classifier: empty training set");
    if (images.size() != labels.size())
        throw DataError("train_classifier: image/label count mismatch");
    for (int l : labels)
        if (l < 0 || l >= clf.classes())
            throw DataError("train_classifier: label outside class range");

    nn::Adam opt(clf.params(), nn::AdamConfig{0.9, 0.999, 1e-8});
    TrainLog log;
    std::vector<int> order(images.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.uniform_u32(static_cast<std::uint32_t>(i))]);
        double epoch_loss = 0.0;
        int batches = 0;
        for (std::size_t from = 0; from < order.size(); from += cfg.batch_size) {
            const int count =
                static_cast<int>(std::min<std::size_t>(cfg.batch_size, order.size() - from));
            Tensor batch = stack_subset(images, order, static_cast<int>(from), count);
            std::vector<int> batch_labels(count);
            for (int i = 0; i < count; ++i) batch_labels[i] = labels[order[from + i]];

            nn::Ctx ctx;
            for (nn::Param* p : clf.params()) p->grad.zero();
            const Tensor z = clf.logits(batch, true, &rng, ctx);
            Tensor gz;
            epoch_loss += softmax_xent(z, batch_labels, &gz);
            clf.net().backward(gz, ctx, true);
            opt.step(cfg.lr);
            ++batches;
        }
        log.epoch_loss.push_back(epoch_loss / std::max(batches, 1));
    }
    return log;
}

double evaluate_accuracy(Classifier& clf, const std::vector<Tensor>& images,
                         const std::vector<int>& labels) {
    if (images.empty()) throw DataError("evaluate_accuracy: empty evaluation set");
    if (images.size() != labels.size())
        throw DataError("evaluate_accuracy: image/label count mismatch");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < images.size(); ++i) {
        const auto pred = clf.predict(images[i]);
        if (pred[0] == labels[i]) ++correct;
    }
    return 100.0 * static_cast<double>(correct) / static_cast<double>(images.size());
}

}  // namespace tacgap::cls
