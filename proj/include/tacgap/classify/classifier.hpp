#ifndef TACGAP_CLASSIFY_CLASSIFIER_HPP
#define TACGAP_CLASSIFY_CLASSIFIER_HPP

#include <memory>
#include <vector>

#include "tacgap/nn/adam.hpp"
#include "tacgap/nn/layers.hpp"
#include "tacgap/util/config.hpp"

namespace tacgap::cls {

// Object classifier: small conv backbone (desk-scale stand-in for a
// pretrained feature extractor) + two dense/batch-norm/ELU head blocks + a
// K-way softmax output.
class Classifier {
public:
    Classifier(const util::ClassifierConfig& cfg, int classes, int input_size, Rng& rng);

    Tensor logits(const Tensor& images, bool train, Rng* rng, nn::Ctx& ctx);
    // Softmax output; rows sum to 1.
    Tensor predict_proba(const Tensor& images);
    std::vector<int> predict(const Tensor& images);

    std::vector<nn::Param*>& params() { return params_; }
    int classes() const { return classes_; }

    nn::Sequential& net() { return net_; }

private:
    nn::Sequential net_;
    std::vector<nn::Param*> params_;
    int classes_;
};

// Cross-entropy over softmax probabilities; returns the mean loss and writes
// d(loss)/d(logits) if glogits is non-null.
double softmax_xent(const Tensor& logits, const std::vector<int>& labels, Tensor* glogits);

struct TrainLog {
    std::vector<double> epoch_loss;
};

// Minibatch cross-entropy training, deterministic per (cfg, seed).
TrainLog train_classifier(Classifier& clf, const std::vector<Tensor>& images,
                          const std::vector<int>& labels, const util::ClassifierConfig& cfg,
                          Rng& rng);

// Top-1 accuracy in percent. Errors on an empty set.
double evaluate_accuracy(Classifier& clf, const std::vector<Tensor>& images,
                         const std::vector<int>& labels);

}  // namespace tacgap::cls

#endif
