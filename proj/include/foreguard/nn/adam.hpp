#pragma once
// Adam with bias-corrected moments. Defaults follow the optimizer's published
// parameters: lr 1e-3, beta1 0.9, beta2 0.999, epsilon 1e-8.

#include <cmath>
#include <cstdint>
#include <vector>

#include "foreguard/common.hpp"
#include "foreguard/nn/network.hpp"

namespace foreguard::nn {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    AdamConfig config;
    std::uint64_t step = 0;
    std::vector<DenseParams> m; // first moments, shaped like the parameters
    std::vector<DenseParams> v; // second moments

    static AdamState init(const Network& net, AdamConfig config = {}) {
        AdamState s;
        s.config = config;
        s.m.resize(net.params.size());
        s.v.resize(net.params.size());
        for (std::size_t i = 0; i < net.params.size(); ++i) {
            if (net.params[i].empty()) continue;
            s.m[i].weight = Tensor(net.params[i].weight.shape);
            s.m[i].bias = Tensor(net.params[i].bias.shape);
            s.v[i].weight = Tensor(net.params[i].weight.shape);
            s.v[i].bias = Tensor(net.params[i].bias.shape);
        }
        return s;
    }
};

namespace detail {

inline void adam_update_array(const AdamConfig& c, double bc1, double bc2, std::vector<double>& p,
                              const std::vector<double>& g, std::vector<double>& m,
                              std::vector<double>& v) {
    for (std::size_t j = 0; j < p.size(); ++j) {
        require(std::isfinite(g[j]), ErrorKind::Training, "non-finite gradient in adam step");
        m[j] = c.beta1 * m[j] + (1.0 - c.beta1) * g[j];
        v[j] = c.beta2 * v[j] + (1.0 - c.beta2) * g[j] * g[j];
        const double mhat = m[j] / bc1;
        const double vhat = v[j] / bc2;
        p[j] -= c.learning_rate * mhat / (std::sqrt(vhat) + c.epsilon);
    }
}

} // namespace detail

// One optimizer step over every dense parameter; increments the step counter.
inline void adam_step(AdamState& state, std::vector<DenseParams>& params, const Gradients& grads) {
    require(params.size() == grads.layers.size() && params.size() == state.m.size(),
            ErrorKind::Dimension, "adam state does not match the parameter set");
    ++state.step;
    const double bc1 = 1.0 - std::pow(state.config.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.config.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i].empty()) continue;
        detail::adam_update_array(state.config, bc1, bc2, params[i].weight.data,
                                  grads.layers[i].weight.data, state.m[i].weight.data,
                                  state.v[i].weight.data);
        detail::adam_update_array(state.config, bc1, bc2, params[i].bias.data,
                                  grads.layers[i].bias.data, state.m[i].bias.data,
                                  state.v[i].bias.data);
    }
}

} // namespace foreguard::nn
