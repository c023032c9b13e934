#pragma once
// Mini-batch training over window pairs, and whole-frame forecasting.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "foreguard/common.hpp"
#include "foreguard/data/frame.hpp"
#include "foreguard/data/windows.hpp"
#include "foreguard/nn/adam.hpp"
#include "foreguard/nn/network.hpp"

namespace foreguard::nn {

struct TrainConfig {
    std::size_t epochs = 1;
    std::size_t batch_size = 32;
    std::uint64_t seed = 0;
    double learning_rate = 1e-3; // loss is MSE, fixed

    void validate() const {
        require(epochs >= 1, ErrorKind::Config, "epochs must be >= 1");
        require(batch_size >= 1, ErrorKind::Config, "batch_size must be >= 1");
        require(learning_rate > 0.0, ErrorKind::Config, "learning_rate must be positive");
    }
};

struct TrainResult {
    std::vector<double> epoch_loss; // mean training loss per epoch
};

namespace detail {

inline void gather_rows(const data::TimeSeriesFrame& frame, std::size_t begin, std::size_t len,
                        double* dst) {
    std::copy_n(frame.values.data() + begin * frame.tags(), len * frame.tags(), dst);
}

} // namespace detail

// Shuffled mini-batch epochs; the last short batch is kept. Deterministic
// for a fixed seed. Throws a diverged-training error on non-finite loss.
inline TrainResult train(Network& net, const data::TimeSeriesFrame& frame,
                         const std::vector<data::WindowPair>& windows, const TrainConfig& config) {
    config.validate();
    require(!windows.empty(), ErrorKind::Data, "training needs at least one window pair");
    require(frame.tags() == net.tags, ErrorKind::Dimension, "frame tag count differs from network");

    const std::size_t in_cols = net.input_size();
    const std::size_t out_cols = net.output_size();

    Rng rng(config.seed);
    AdamConfig adam_config;
    adam_config.learning_rate = config.learning_rate;
    AdamState adam = AdamState::init(net, adam_config);

    std::vector<std::size_t> order(windows.size());
    std::iota(order.begin(), order.end(), 0);

    TrainResult result;
    result.epoch_loss.reserve(config.epochs);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        // Fisher-Yates with the training rng
        for (std::size_t i = order.size(); i-- > 1;)
            std::swap(order[i], order[rng.index(i + 1)]);

        double loss_sum = 0.0;
        for (std::size_t offset = 0; offset < order.size(); offset += config.batch_size) {
            const std::size_t b = std::min(config.batch_size, order.size() - offset);
            Tensor x = Tensor::matrix(b, in_cols);
            Tensor y = Tensor::matrix(b, out_cols);
            for (std::size_t r = 0; r < b; ++r) {
                const auto& w = windows[order[offset + r]];
                detail::gather_rows(frame, w.input_begin, net.input_len, x.data.data() + r * in_cols);
                detail::gather_rows(frame, w.target_begin, net.output_len,
                                    y.data.data() + r * out_cols);
            }
            auto step = backprop(net, x, y, /*train_mode=*/true, &rng);
            require(std::isfinite(step.loss), ErrorKind::Training,
                    strfmt("training diverged at epoch %zu (non-finite loss)", epoch + 1));
            adam_step(adam, net.params, step.grads);
            loss_sum += step.loss * static_cast<double>(b);
        }
        result.epoch_loss.push_back(loss_sum / static_cast<double>(windows.size()));
    }
    return result;
}

// Mean MSE over the given window pairs without touching the parameters.
inline double evaluate_mse(const Network& net, const data::TimeSeriesFrame& frame,
                           const std::vector<data::WindowPair>& windows,
                           std::size_t chunk = 256) {
    require(!windows.empty(), ErrorKind::Data, "evaluation needs at least one window pair");
    const std::size_t in_cols = net.input_size();
    const std::size_t out_cols = net.output_size();
    double loss_sum = 0.0;
    for (std::size_t offset = 0; offset < windows.size(); offset += chunk) {
        const std::size_t b = std::min(chunk, windows.size() - offset);
        Tensor x = Tensor::matrix(b, in_cols);
        Tensor y = Tensor::matrix(b, out_cols);
        for (std::size_t r = 0; r < b; ++r) {
            const auto& w = windows[offset + r];
            detail::gather_rows(frame, w.input_begin, net.input_len, x.data.data() + r * in_cols);
            detail::gather_rows(frame, w.target_begin, net.output_len, y.data.data() + r * out_cols);
        }
        loss_sum += mse_loss(forward(net, x), y).loss * static_cast<double>(b);
    }
    return loss_sum / static_cast<double>(windows.size());
}

// Forecast matrix x~ (S x m): every complete target window is written exactly
// once; the first L+h rows and any trailing rows past the last target window
// are copied from the actuals (zero residual there by construction).
inline Tensor predict_frame(const Network& net, const data::TimeSeriesFrame& frame,
                            const data::WindowSpec& spec, std::size_t chunk = 256) {
    require(frame.tags() == net.tags, ErrorKind::Dimension, "frame tag count differs from network");
    require(spec.input_len == net.input_len && spec.forecast_len == net.output_len,
            ErrorKind::Dimension, "window spec does not match network dimensions");
    const auto windows = data::make_windows(frame, spec);

    const std::size_t s = frame.points();
    const std::size_t m = frame.tags();
    Tensor forecast = Tensor::matrix(s, m);
    std::copy(frame.values.begin(), frame.values.end(), forecast.data.begin());

    const std::size_t in_cols = net.input_size();
    for (std::size_t offset = 0; offset < windows.size(); offset += chunk) {
        const std::size_t b = std::min(chunk, windows.size() - offset);
        Tensor x = Tensor::matrix(b, in_cols);
        for (std::size_t r = 0; r < b; ++r)
            detail::gather_rows(frame, windows[offset + r].input_begin, net.input_len,
                                x.data.data() + r * in_cols);
        const Tensor y = forward(net, x);
        for (std::size_t r = 0; r < b; ++r) {
            const auto& w = windows[offset + r];
            std::copy_n(y.data.data() + r * y.cols(), y.cols(),
                        forecast.data.data() + w.target_begin * m);
        }
    }
    return forecast;
}

} // namespace foreguard::nn
