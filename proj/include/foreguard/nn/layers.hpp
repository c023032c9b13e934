#pragma once
// Layer vocabulary. The trainable engine implements Dense and Dropout;
// Convolutional/GRU/LSTM stay parseable so architecture templates can name
// them, but materializing one raises an unimplemented-layer error.

#include <cmath>
#include <cstdint>
#include <string>

#include "foreguard/common.hpp"

namespace foreguard::nn {

enum class LayerKind : std::uint8_t { Dense = 0, Dropout = 1, Convolutional = 2, Gru = 3, Lstm = 4 };

enum class Activation : std::uint8_t { Linear = 0, Relu = 1, Tanh = 2, Sigmoid = 3, Softmax = 4 };

inline bool layer_kind_trainable(LayerKind k) {
    return k == LayerKind::Dense || k == LayerKind::Dropout;
}

inline const char* to_string(LayerKind k) {
    switch (k) {
        case LayerKind::Dense: return "dense";
        case LayerKind::Dropout: return "dropout";
        case LayerKind::Convolutional: return "convolutional";
        case LayerKind::Gru: return "gru";
        case LayerKind::Lstm: return "lstm";
    }
    return "?";
}

inline const char* to_string(Activation a) {
    switch (a) {
        case Activation::Linear: return "linear";
        case Activation::Relu: return "relu";
        case Activation::Tanh: return "tanh";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Softmax: return "softmax";
    }
    return "?";
}

inline LayerKind layer_kind_from_string(const std::string& s) {
    if (s == "dense") return LayerKind::Dense;
    if (s == "dropout") return LayerKind::Dropout;
    if (s == "convolutional" || s == "conv") return LayerKind::Convolutional;
    if (s == "gru") return LayerKind::Gru;
    if (s == "lstm") return LayerKind::Lstm;
    fail(ErrorKind::Parse, strfmt("unknown layer kind '%s'", s.c_str()));
}

inline Activation activation_from_string(const std::string& s) {
    if (s == "linear") return Activation::Linear;
    if (s == "relu") return Activation::Relu;
    if (s == "tanh") return Activation::Tanh;
    if (s == "sigmoid") return Activation::Sigmoid;
    if (s == "softmax") return Activation::Softmax;
    fail(ErrorKind::Parse, strfmt("unknown activation '%s'", s.c_str()));
}

struct LayerConfig {
    LayerKind kind = LayerKind::Dense;
    Activation activation = Activation::Linear;
    std::size_t units = 1; // Dense output width
    double rate = 0.0;     // Dropout rate, strictly inside (0, 1)

    static LayerConfig dense(std::size_t units, Activation act = Activation::Linear) {
        LayerConfig c;
        c.kind = LayerKind::Dense;
        c.units = units;
        c.activation = act;
        return c;
    }

    static LayerConfig dropout(double rate) {
        LayerConfig c;
        c.kind = LayerKind::Dropout;
        c.rate = rate;
        return c;
    }

    void validate(std::size_t index) const {
        if (kind == LayerKind::Dense)
            require(units >= 1, ErrorKind::Config, strfmt("layer %zu: dense size must be >= 1", index));
        if (kind == LayerKind::Dropout)
            require(rate > 0.0 && rate < 1.0, ErrorKind::Config,
                    strfmt("layer %zu: dropout rate %g outside (0,1)", index, rate));
    }
};

inline double apply_activation(Activation a, double x) {
    switch (a) {
        case Activation::Linear: return x;
        case Activation::Relu: return x > 0.0 ? x : 0.0;
        case Activation::Tanh: return std::tanh(x);
        case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-x));
        case Activation::Softmax: break; // handled row-wise by the caller
    }
    return x;
}

// derivative expressed through the activation output y (= f(x))
inline double activation_grad_from_output(Activation a, double y) {
    switch (a) {
        case Activation::Linear: return 1.0;
        case Activation::Relu: return y > 0.0 ? 1.0 : 0.0;
        case Activation::Tanh: return 1.0 - y * y;
        case Activation::Sigmoid: return y * (1.0 - y);
        case Activation::Softmax: break; // full Jacobian, handled by the caller
    }
    return 1.0;
}

} // namespace foreguard::nn
