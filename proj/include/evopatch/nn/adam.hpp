#pragma once

#include <cmath>
#include <cstddef>

namespace evopatch::nn {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// One update over a parameter block. t is the 1-based step count, shared by
// every block in the model so the bias correction stays in sync.
template <typename T>
void adam_step(T* params, const T* grads, T* m, T* v, std::size_t n, const AdamConfig& cfg,
               long t) {
    const double corr1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
    const double corr2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < n; ++i) {
        const double g = static_cast<double>(grads[i]);
        const double mi = cfg.beta1 * static_cast<double>(m[i]) + (1.0 - cfg.beta1) * g;
        const double vi = cfg.beta2 * static_cast<double>(v[i]) + (1.0 - cfg.beta2) * g * g;
        m[i] = static_cast<T>(mi);
        v[i] = static_cast<T>(vi);
        const double mhat = mi / corr1;
        const double vhat = vi / corr2;
        params[i] -= static_cast<T>(cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon));
    }
}

} // namespace evopatch::nn
