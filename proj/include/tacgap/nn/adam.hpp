#ifndef TACGAP_NN_ADAM_HPP
#define TACGAP_NN_ADAM_HPP

#include <vector>

#include "tacgap/nn/layers.hpp"

namespace tacgap::nn {

struct AdamConfig {
    double beta1 = 0.5;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Adaptive-moment optimizer over a fixed parameter set. The learning rate is
// passed per step so schedules stay in the trainer.
class Adam {
public:
    Adam(std::vector<Param*> params, AdamConfig cfg);

    void step(double lr);
    void zero_grad();

    const std::vector<Param*>& params() const { return params_; }
    long long t() const { return t_; }
    void set_t(long long t) { t_ = t; }
    Tensor& moment1(std::size_t i) { return m_[i]; }
    Tensor& moment2(std::size_t i) { return v_[i]; }

private:
    std::vector<Param*> params_;
    std::vector<Tensor> m_, v_;
    AdamConfig cfg_;
    long long t_ = 0;
};

}  // namespace tacgap::nn

#endif
