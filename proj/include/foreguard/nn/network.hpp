#pragma once
// Dense feed-forward network: window in, window out, both flattened. Forward,
// loss, and backprop are deterministic given the seed and input bytes.

#include <cstddef>
#include <optional>
#include <vector>

#include "foreguard/common.hpp"
#include "foreguard/nn/layers.hpp"
#include "foreguard/nn/tensor.hpp"

namespace foreguard::nn {

struct DenseParams {
    Tensor weight; // (fan_in, fan_out)
    Tensor bias;   // (fan_out)

    bool empty() const { return weight.data.empty(); }
};

// (timepoints, tags) extent of a window at the network boundary
struct WindowShape {
    std::size_t len = 1;
    std::size_t tags = 1;

    std::size_t flat() const { return len * tags; }
};

/// Forecaster mapping a flattened input window to a flattened output window.
/// Dropout layers hold no parameters and act as identity outside training.
struct Network {
    WindowShape input;  // (L, m)
    WindowShape output; // (forecast length, m)
    std::vector<LayerConfig> layers;
    std::vector<DenseParams> params; // parallel to layers; empty for non-dense

    std::size_t input_size() const { return input.flat(); }
    std::size_t output_size() const { return output.flat(); }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (const auto& p : params)
            if (!p.empty()) n += p.weight.size() + p.bias.size();
        return n;
    }
};

// Uniform Glorot-style initialization: W ~ U(-sqrt(6/(fan_in+fan_out)), +),
// biases zero. Deterministic for a fixed seed.
inline Network init_network(const std::vector<LayerConfig>& configs, WindowShape input,
                            WindowShape output, std::uint64_t seed) {
    Network net;
    net.input = input;
    net.output = output;
    net.layers = configs;
    net.params.resize(configs.size());

    Rng rng(seed);
    std::size_t width = net.input_size();
    for (std::size_t i = 0; i < configs.size(); ++i) {
        LayerConfig& layer = net.layers[i];
        layer.validate(i);
        switch (layer.kind) {
            case LayerKind::Dense: {
                const std::size_t fan_in = width;
                const std::size_t fan_out = layer.units;
                auto& p = net.params[i];
                p.weight = Tensor::matrix(fan_in, fan_out);
                const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
                for (double& w : p.weight.data) w = rng.uniform(-limit, limit);
                p.bias = Tensor({fan_out});
                width = fan_out;
                break;
            }
            case LayerKind::Dropout:
                layer.activation = Activation::Linear; // dropout is a pass-through scaler
                break;
            default:
                fail(ErrorKind::Unimplemented,
                     strfmt("layer %zu: '%s' layers are recognized but not trainable in this engine",
                            i, to_string(layer.kind)));
        }
    }
    require(width == net.output_size(), ErrorKind::Dimension,
            strfmt("layer chain ends at width %zu, output needs %zu (layer %zu)", width,
                   net.output_size(), configs.empty() ? 0 : configs.size() - 1));
    return net;
}

struct ForwardTrace {
    std::vector<Tensor> outputs; // post-activation output per layer
    std::vector<Tensor> masks;   // inverted-dropout masks (train mode only)
};

namespace detail {

inline void softmax_rows(Tensor& z) {
    const std::size_t r = z.rows(), c = z.cols();
    for (std::size_t i = 0; i < r; ++i) {
        double* row = z.data.data() + i * c;
        double mx = row[0];
        for (std::size_t j = 1; j < c; ++j) mx = std::max(mx, row[j]);
        double sum = 0.0;
        for (std::size_t j = 0; j < c; ++j) {
            row[j] = std::exp(row[j] - mx);
            sum += row[j];
        }
        for (std::size_t j = 0; j < c; ++j) row[j] /= sum;
    }
}

} // namespace detail

// batch: (B, L*m). Returns (B, F*m). In train mode dropout uses the inverted
// convention (mask scaled by 1/(1-rate)) so inference needs no rescaling; rng
// is required iff train_mode and a dropout layer exists.
inline Tensor forward(const Network& net, const Tensor& batch, bool train_mode = false,
                      Rng* rng = nullptr, ForwardTrace* trace = nullptr) {
    require(batch.rank() == 2 && batch.cols() == net.input_size(), ErrorKind::Dimension,
            strfmt("forward expects batch columns %zu, got %zu", net.input_size(),
                   batch.rank() == 2 ? batch.cols() : std::size_t{0}));
    if (trace) {
        trace->outputs.assign(net.layers.size(), {});
        trace->masks.assign(net.layers.size(), {});
    }

    Tensor current = batch;
    Tensor next;
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        const LayerConfig& layer = net.layers[i];
        if (layer.kind == LayerKind::Dense) {
            const auto& p = net.params[i];
            matmul(current, p.weight, next);
            for (std::size_t r = 0; r < next.rows(); ++r) {
                double* row = next.data.data() + r * next.cols();
                for (std::size_t c = 0; c < next.cols(); ++c) row[c] += p.bias.data[c];
            }
            if (layer.activation == Activation::Softmax) {
                detail::softmax_rows(next);
            } else if (layer.activation != Activation::Linear) {
                for (double& v : next.data) v = apply_activation(layer.activation, v);
            }
            current = next;
        } else { // Dropout
            if (train_mode) {
                require(rng != nullptr, ErrorKind::Training, "dropout in train mode needs an rng");
                Tensor mask(current.shape);
                const double keep = 1.0 - layer.rate;
                for (std::size_t j = 0; j < mask.size(); ++j)
                    mask.data[j] = (rng->uniform() < layer.rate) ? 0.0 : 1.0 / keep;
                for (std::size_t j = 0; j < current.size(); ++j) current.data[j] *= mask.data[j];
                if (trace) trace->masks[i] = std::move(mask);
            }
            // inference: identity
        }
        if (trace) trace->outputs[i] = current;
    }
    return current;
}

struct MseResult {
    double loss = 0.0;
    Tensor grad; // dLoss/dPred, same shape as pred
};

// mean over all elements of squared difference; gradient 2(pred-target)/count
inline MseResult mse_loss(const Tensor& pred, const Tensor& target) {
    require(pred.same_shape(target), ErrorKind::Dimension, "mse_loss shape mismatch");
    MseResult out;
    out.grad = Tensor(pred.shape);
    const double inv = 1.0 / static_cast<double>(pred.size());
    for (std::size_t j = 0; j < pred.size(); ++j) {
        const double d = pred.data[j] - target.data[j];
        out.loss += d * d * inv;
        out.grad.data[j] = 2.0 * d * inv;
    }
    return out;
}

struct Gradients {
    std::vector<DenseParams> layers; // same layout as Network::params

    void accumulate_scaled(const Gradients& other, double scale) {
        for (std::size_t i = 0; i < layers.size(); ++i) {
            if (layers[i].empty()) continue;
            for (std::size_t j = 0; j < layers[i].weight.size(); ++j)
                layers[i].weight.data[j] += scale * other.layers[i].weight.data[j];
            for (std::size_t j = 0; j < layers[i].bias.size(); ++j)
                layers[i].bias.data[j] += scale * other.layers[i].bias.data[j];
        }
    }
};

struct BackpropResult {
    double loss = 0.0;
    Tensor prediction;
    Gradients grads;
};

// Full training step evaluation: forward (optionally with dropout), MSE loss,
// and gradients for every dense weight/bias. No state is retained.
inline BackpropResult backprop(const Network& net, const Tensor& batch, const Tensor& target,
                               bool train_mode = false, Rng* rng = nullptr) {
    ForwardTrace trace;
    BackpropResult out;
    out.prediction = forward(net, batch, train_mode, rng, &trace);
    auto mse = mse_loss(out.prediction, target);
    out.loss = mse.loss;

    out.grads.layers.resize(net.layers.size());
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        if (!net.params[i].empty()) {
            out.grads.layers[i].weight = Tensor(net.params[i].weight.shape);
            out.grads.layers[i].bias = Tensor(net.params[i].bias.shape);
        }
    }

    Tensor grad = std::move(mse.grad); // dLoss/d(layer output)
    Tensor grad_prev;
    for (std::size_t idx = net.layers.size(); idx-- > 0;) {
        const LayerConfig& layer = net.layers[idx];
        const Tensor& output = trace.outputs[idx];
        const Tensor& input = idx == 0 ? batch : trace.outputs[idx - 1];
        if (layer.kind == LayerKind::Dense) {
            // activation jacobian
            if (layer.activation == Activation::Softmax) {
                for (std::size_t r = 0; r < output.rows(); ++r) {
                    const double* y = output.data.data() + r * output.cols();
                    double* g = grad.data.data() + r * output.cols();
                    double dot = 0.0;
                    for (std::size_t c = 0; c < output.cols(); ++c) dot += g[c] * y[c];
                    for (std::size_t c = 0; c < output.cols(); ++c) g[c] = y[c] * (g[c] - dot);
                }
            } else if (layer.activation != Activation::Linear) {
                for (std::size_t j = 0; j < grad.size(); ++j)
                    grad.data[j] *= activation_grad_from_output(layer.activation, output.data[j]);
            }
            auto& g = out.grads.layers[idx];
            matmul_at_b(input, grad, g.weight); // dW = x^T * gz
            for (std::size_t r = 0; r < grad.rows(); ++r) {
                const double* row = grad.data.data() + r * grad.cols();
                for (std::size_t c = 0; c < grad.cols(); ++c) g.bias.data[c] += row[c];
            }
            if (idx > 0) {
                matmul_a_bt(grad, net.params[idx].weight, grad_prev); // dx = gz * W^T
                std::swap(grad, grad_prev);
            }
        } else { // Dropout
            if (!trace.masks[idx].data.empty())
                for (std::size_t j = 0; j < grad.size(); ++j)
                    grad.data[j] *= trace.masks[idx].data[j];
        }
    }
    return out;
}

// Evaluation-mode gradients (no dropout), the contract gradient checks use.
inline BackpropResult backward(const Network& net, const Tensor& batch, const Tensor& target) {
    return backprop(net, batch, target, false, nullptr);
}

// Layer table for reports: index, type, activation, output size, parameters.
inline std::string summary(const Network& net) {
    std::string out = strfmt("input: %zu x %zu (flattened %zu)\n", net.input.len, net.input.tags,
                             net.input_size());
    std::size_t width = net.input_size();
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        const auto& layer = net.layers[i];
        if (layer.kind == LayerKind::Dense) {
            width = layer.units;
            out += strfmt("%zu | dense | %s | %zu | params %zu\n", i + 1,
                          to_string(layer.activation), width,
                          net.params[i].weight.size() + net.params[i].bias.size());
        } else {
            out += strfmt("%zu | dropout(%g) | - | %zu | params 0\n", i + 1, layer.rate, width);
        }
    }
    out += strfmt("output: %zu x %zu (flattened %zu)\n", net.output_len, net.tags,
                  net.output_size());
    return out;
}

} // namespace foreguard::nn
