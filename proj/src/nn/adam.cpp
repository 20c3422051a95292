#include "tacgap/nn/adam.hpp"

#include <cmath>

namespace tacgap::nn {

Adam::Adam(std::vector<Param*> params, AdamConfig cfg) : params_(std::move(params)), cfg_(cfg) {
    m_.reserve(params_.size());
    v_.reserve(params_.size());
    for (Param* p : params_) {
        m_.emplace_back(p->value.n, p->value.c, p->value.h, p->value.w);
        v_.emplace_back(p->value.n, p->value.c, p->value.h, p->value.w);
    }
}

void Adam::step(double lr) {
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    const float b1 = static_cast<float>(cfg_.beta1), b2 = static_cast<float>(cfg_.beta2);
    const float ib1 = 1.0f - b1, ib2 = 1.0f - b2;
    const float alpha = static_cast<float>(lr * std::sqrt(bc2) / bc1);
    const float eps = static_cast<float>(cfg_.eps * std::sqrt(bc2));
    for (std::size_t i = 0; i < params_.size(); ++i) {
        float* w = params_[i]->value.data();
        const float* g = params_[i]->grad.data();
        float* m = m_[i].data();
        float* v = v_[i].data();
        const std::size_t len = params_[i]->value.size();
        for (std::size_t j = 0; j < len; ++j) {
            m[j] = b1 * m[j] + ib1 * g[j];
            v[j] = b2 * v[j] + ib2 * g[j] * g[j];
            w[j] -= alpha * m[j] / (std::sqrt(v[j]) + eps);
        }
    }
}

void Adam::zero_grad() {
    for (Param* p : params_) p->grad.zero();
}

}  // namespace tacgap::nn
