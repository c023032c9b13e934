#include <catch2/catch_amalgamated.hpp>

#include "foreguard/data/synth.hpp"
#include "foreguard/nn/adam.hpp"
#include "foreguard/nn/network.hpp"
#include "foreguard/nn/serialize.hpp"
#include "foreguard/nn/train.hpp"
#include "gradient_check.hpp"
#include "helpers.hpp"

using namespace foreguard;
using namespace foreguard::nn;

TEST_CASE("init_network shapes and determinism") {
    SECTION("single dense layer shape bookkeeping") {
        const auto net = init_network({LayerConfig::dense(4)}, 2, 1, 2, 0);
        CHECK(net.params[0].weight.rows() == 4);
        CHECK(net.params[0].weight.cols() == 4);
        CHECK(net.params[0].bias.size() == 4);
        for (double b : net.params[0].bias.data) CHECK(b == 0.0);
    }
    SECTION("same seed gives identical parameters") {
        const auto a = init_network({LayerConfig::dense(8, Activation::Tanh), LayerConfig::dense(6)},
                                    3, 2, 3, 1234);
        const auto b = init_network({LayerConfig::dense(8, Activation::Tanh), LayerConfig::dense(6)},
                                    3, 2, 3, 1234);
        CHECK(a.params[0].weight.data == b.params[0].weight.data);
        CHECK(a.params[1].weight.data == b.params[1].weight.data);
    }
    SECTION("published best-model widths chain for (200, 51, 4)") {
        const std::vector<LayerConfig> configs = {
            LayerConfig::dense(2193, Activation::Relu), LayerConfig::dense(96, Activation::Relu),
            LayerConfig::dense(71, Activation::Relu), LayerConfig::dense(204)};
        const auto net = init_network(configs, 200, 4, 51, 7);
        CHECK(net.params[0].weight.rows() == 200 * 51);
        CHECK(net.params[3].weight.cols() == 4 * 51);
    }
    SECTION("broken chain names the layer") {
        CHECK_THROWS_AS(init_network({LayerConfig::dense(5)}, 2, 1, 2, 0), Error);
    }
    SECTION("recurrent and convolutional kinds are rejected as unimplemented") {
        LayerConfig gru;
        gru.kind = LayerKind::Gru;
        gru.units = 4;
        try {
            init_network({gru, LayerConfig::dense(4)}, 2, 1, 2, 0);
            FAIL("expected unimplemented-layer error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Unimplemented);
        }
    }
}

TEST_CASE("forward basics") {
    SECTION("identity dense layer") {
        auto net = init_network({LayerConfig::dense(4)}, 2, 2, 2, 0);
        std::fill(net.params[0].weight.data.begin(), net.params[0].weight.data.end(), 0.0);
        for (std::size_t i = 0; i < 4; ++i) net.params[0].weight.at(i, i) = 1.0;
        Tensor x = Tensor::matrix(2, 4);
        Rng rng(3);
        for (double& v : x.data) v = rng.normal();
        const auto y = forward(net, x);
        CHECK(y.data == x.data);
    }
    SECTION("relu floors negative pre-activations at zero") {
        auto net = init_network({LayerConfig::dense(3, Activation::Relu)}, 3, 1, 1, 0);
        std::fill(net.params[0].weight.data.begin(), net.params[0].weight.data.end(), 0.0);
        net.params[0].bias.data = {-1.0, -0.5, -2.0};
        Tensor x = Tensor::matrix(1, 3);
        x.data = {1.0, 1.0, 1.0};
        const auto y = forward(net, x);
        CHECK(y.data == std::vector<double>{0.0, 0.0, 0.0});
    }
    SECTION("softmax rows sum to one") {
        auto net = init_network({LayerConfig::dense(5, Activation::Softmax)}, 5, 5, 1, 11);
        Tensor x = Tensor::matrix(3, 5);
        Rng rng(5);
        for (double& v : x.data) v = 3.0 * rng.normal();
        const auto y = forward(net, x);
        for (std::size_t r = 0; r < 3; ++r) {
            double sum = 0.0;
            for (std::size_t c = 0; c < 5; ++c) sum += y.at(r, c);
            CHECK(std::abs(sum - 1.0) < 1e-9);
        }
    }
    SECTION("shape mismatch raises") {
        const auto net = init_network({LayerConfig::dense(2)}, 2, 1, 2, 0);
        Tensor x = Tensor::matrix(1, 3);
        CHECK_THROWS_AS(forward(net, x), Error);
    }
}

TEST_CASE("mse loss and gradient") {
    SECTION("identical tensors give zero loss and gradient") {
        Tensor a = Tensor::matrix(2, 2);
        a.data = {1, 2, 3, 4};
        const auto r = mse_loss(a, a);
        CHECK(r.loss == 0.0);
        for (double g : r.grad.data) CHECK(g == 0.0);
    }
    SECTION("hand value") {
        Tensor p = Tensor::matrix(1, 2), t = Tensor::matrix(1, 2);
        p.data = {1, 1};
        t.data = {0, 2};
        CHECK(mse_loss(p, t).loss == 1.0);
    }
    SECTION("gradient matches finite differences") {
        Rng rng(21);
        Tensor p = Tensor::matrix(3, 4), t = Tensor::matrix(3, 4);
        for (double& v : p.data) v = rng.normal();
        for (double& v : t.data) v = rng.normal();
        const auto r = mse_loss(p, t);
        const double h = 1e-6;
        for (std::size_t j = 0; j < p.size(); ++j) {
            Tensor up = p, down = p;
            up.data[j] += h;
            down.data[j] -= h;
            const double fd = (mse_loss(up, t).loss - mse_loss(down, t).loss) / (2 * h);
            CHECK(std::abs(fd - r.grad.data[j]) <
                  1e-6 * std::max({1.0, std::abs(fd), std::abs(r.grad.data[j])}));
        }
    }
}

TEST_CASE("backward") {
    SECTION("zero upstream gradient gives zero parameter gradients") {
        const auto net = init_network({LayerConfig::dense(4, Activation::Tanh),
                                       LayerConfig::dense(2)},
                                      2, 1, 2, 3);
        Tensor x = Tensor::matrix(2, 4);
        Rng rng(17);
        for (double& v : x.data) v = rng.normal();
        const Tensor target = forward(net, x); // pred == target -> zero gradient
        const auto r = backward(net, x, target);
        for (const auto& layer : r.grads.layers) {
            if (layer.empty()) continue;
            for (double g : layer.weight.data) CHECK(g == 0.0);
            for (double g : layer.bias.data) CHECK(g == 0.0);
        }
    }
    SECTION("single linear layer matches the closed-form gradient") {
        const std::size_t b = 3, in = 4, out = 2;
        const auto net = init_network({LayerConfig::dense(out)}, in, 1, 2, 9);
        Rng rng(8);
        Tensor x = Tensor::matrix(b, in), y = Tensor::matrix(b, out);
        for (double& v : x.data) v = rng.normal();
        for (double& v : y.data) v = rng.normal();
        const auto r = backward(net, x, y);
        // dW = x^T (pred - y) * 2 / (b*out), evaluated independently here
        const auto pred = forward(net, x);
        const double scale = 2.0 / static_cast<double>(b * out);
        for (std::size_t i = 0; i < in; ++i)
            for (std::size_t j = 0; j < out; ++j) {
                double acc = 0.0;
                for (std::size_t r2 = 0; r2 < b; ++r2)
                    acc += x.at(r2, i) * (pred.at(r2, j) - y.at(r2, j));
                CHECK(std::abs(r.grads.layers[0].weight.at(i, j) - acc * scale) < 1e-12);
            }
    }
    SECTION("analytic gradients match finite differences on random nets") {
        Rng rng(2024);
        for (int trial = 0; trial < 6; ++trial) {
            const auto c = testutil::random_case(rng);
            CHECK(testutil::max_gradient_error(c) < 1e-4);
        }
    }
}

TEST_CASE("adam steps") {
    auto net = init_network({LayerConfig::dense(3)}, 3, 1, 1, 5);
    auto state = AdamState::init(net);

    SECTION("zero gradient leaves parameters unchanged") {
        Gradients g;
        g.layers.resize(1);
        g.layers[0].weight = Tensor(net.params[0].weight.shape);
        g.layers[0].bias = Tensor(net.params[0].bias.shape);
        const auto before = net.params[0].weight.data;
        adam_step(state, net.params, g);
        CHECK(net.params[0].weight.data == before);
        CHECK(state.step == 1);
    }
    SECTION("constant gradient at step one moves by about the learning rate") {
        Gradients g;
        g.layers.resize(1);
        g.layers[0].weight = Tensor(net.params[0].weight.shape);
        g.layers[0].bias = Tensor(net.params[0].bias.shape);
        std::fill(g.layers[0].weight.data.begin(), g.layers[0].weight.data.end(), 0.37);
        const auto before = net.params[0].weight.data;
        adam_step(state, net.params, g);
        for (std::size_t j = 0; j < before.size(); ++j) {
            const double moved = before[j] - net.params[0].weight.data[j];
            CHECK(std::abs(moved - 1e-3) < 1e-8); // bias correction cancels at t=1
        }
    }
    SECTION("non-finite gradient raises a training error") {
        Gradients g;
        g.layers.resize(1);
        g.layers[0].weight = Tensor(net.params[0].weight.shape);
        g.layers[0].bias = Tensor(net.params[0].bias.shape);
        g.layers[0].weight.data[0] = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(adam_step(state, net.params, g), Error);
    }
}

namespace {

data::TimeSeriesFrame sine_frame(std::size_t points, std::size_t tags, std::uint64_t seed) {
    data::SynthConfig config;
    config.points = points;
    for (std::size_t i = 0; i < tags; ++i)
        config.tags.push_back(data::TagSpec{.kind = data::SignalKind::Sine,
                                            .period = 20.0 + 7.0 * static_cast<double>(i),
                                            .phase = 0.4 * static_cast<double>(i)});
    return data::synth_generate(config, seed);
}

} // namespace

TEST_CASE("training") {
    const auto frame = sine_frame(400, 2, 3);
    const data::WindowSpec spec{20, 4, 4};
    const auto windows = data::make_windows(frame, spec);

    SECTION("constant-zero targets are learned to near-zero loss") {
        data::TimeSeriesFrame zeros = frame;
        std::fill(zeros.values.begin(), zeros.values.end(), 0.0);
        auto net = init_network({LayerConfig::dense(spec.forecast_len * 2)}, spec.input_len, spec.forecast_len,
                                2, 11);
        TrainConfig config;
        config.epochs = 200;
        config.batch_size = windows.size(); // full batch: deterministic quadratic descent
        config.seed = 4;
        const auto zero_windows = data::make_windows(zeros, spec);
        const auto result = train(net, zeros, zero_windows, config);
        CHECK(result.epoch_loss.back() < 1e-4);
        for (std::size_t i = 1; i < result.epoch_loss.size(); ++i)
            CHECK(result.epoch_loss[i] <= result.epoch_loss[i - 1] + 1e-12);
    }
    SECTION("zero epochs are rejected") {
        auto net = init_network({LayerConfig::dense(spec.forecast_len * 2)}, spec.input_len,
                                spec.forecast_len, 2, 11);
        TrainConfig config;
        config.epochs = 0;
        CHECK_THROWS_AS(train(net, frame, windows, config), Error);
    }
    SECTION("descent sanity on a learnable task") {
        auto net = init_network(
            {LayerConfig::dense(32, Activation::Tanh), LayerConfig::dense(spec.forecast_len * 2)},
            spec.input_len, spec.forecast_len, 2, 11);
        TrainConfig config;
        config.epochs = 20;
        config.batch_size = 16;
        config.seed = 9;
        const auto result = train(net, frame, windows, config);
        CHECK(result.epoch_loss.back() < result.epoch_loss.front());
    }
    SECTION("identical seeds give identical trajectories") {
        TrainConfig config;
        config.epochs = 5;
        config.batch_size = 8;
        config.seed = 31;
        auto net1 = init_network({LayerConfig::dense(spec.forecast_len * 2)}, spec.input_len,
                                 spec.forecast_len, 2, 12);
        auto net2 = init_network({LayerConfig::dense(spec.forecast_len * 2)}, spec.input_len,
                                 spec.forecast_len, 2, 12);
        const auto r1 = train(net1, frame, windows, config);
        const auto r2 = train(net2, frame, windows, config);
        CHECK(r1.epoch_loss == r2.epoch_loss);
        CHECK(net1.params[0].weight.data == net2.params[0].weight.data);
    }
}

TEST_CASE("predict_frame") {
    const data::WindowSpec spec{10, 5, 3};

    SECTION("a memorizing net reproduces the frame everywhere") {
        data::SynthConfig config;
        config.points = 100;
        config.tags = {data::TagSpec{.kind = data::SignalKind::Constant, .value = 2.5}};
        const auto frame = data::synth_generate(config, 0);
        auto net = init_network({LayerConfig::dense(spec.forecast_len)}, spec.input_len,
                                spec.forecast_len, 1, 0);
        std::fill(net.params[0].weight.data.begin(), net.params[0].weight.data.end(), 0.0);
        std::fill(net.params[0].bias.data.begin(), net.params[0].bias.data.end(), 2.5);
        const auto forecast = predict_frame(net, frame, spec);
        for (std::size_t j = 0; j < frame.values.size(); ++j)
            CHECK(forecast.data[j] == frame.values[j]);
    }
    SECTION("leading rows and the tail copy the actuals; the tiled range is forecast") {
        data::SynthConfig config;
        config.points = 103; // leaves a partial trailing window
        config.tags = {data::TagSpec{.kind = data::SignalKind::Constant, .value = 0.0}};
        auto frame = data::synth_generate(config, 0);
        auto net = init_network({LayerConfig::dense(spec.forecast_len)}, spec.input_len,
                                spec.forecast_len, 1, 0);
        std::fill(net.params[0].bias.data.begin(), net.params[0].bias.data.end(), 9.0);
        std::fill(net.params[0].weight.data.begin(), net.params[0].weight.data.end(), 0.0);
        const auto forecast = predict_frame(net, frame, spec);
        const std::size_t lead = spec.lead();
        const std::size_t k = spec.count(frame.points());
        const std::size_t tiled_end = lead + k * spec.forecast_len;
        for (std::size_t t = 0; t < frame.points(); ++t) {
            if (t < lead || t >= tiled_end) CHECK(forecast.at(t, 0) == 0.0);
            else CHECK(forecast.at(t, 0) == 9.0);
        }
    }
}

TEST_CASE("dropout behaves as an inverted-dropout scaler") {
    std::vector<LayerConfig> configs = {LayerConfig::dropout(0.3)};
    const auto net = init_network(configs, 1, 1, 64, 0);
    Tensor x = Tensor::matrix(1, 64);
    Rng data_rng(40);
    for (double& v : x.data) v = 1.0 + std::abs(data_rng.normal());

    SECTION("inference is the identity") {
        const auto y = forward(net, x);
        CHECK(y.data == x.data);
    }
    SECTION("train-mode expectation matches inference within 2 percent") {
        Rng rng(123);
        std::vector<double> mean(64, 0.0);
        const int passes = 10000;
        for (int p = 0; p < passes; ++p) {
            const auto y = forward(net, x, true, &rng);
            for (std::size_t j = 0; j < 64; ++j) mean[j] += y.data[j];
        }
        for (std::size_t j = 0; j < 64; ++j) {
            mean[j] /= passes;
            CHECK(std::abs(mean[j] - x.data[j]) / x.data[j] < 0.02);
        }
    }
}

TEST_CASE("model serialization") {
    const auto net = init_network(
        {LayerConfig::dense(16, Activation::Tanh), LayerConfig::dropout(0.2),
         LayerConfig::dense(6, Activation::Sigmoid)},
        3, 2, 3, 99);
    testutil::TempDir dir;
    const auto path = dir.file("model.fgm");
    save_model(net, path);

    SECTION("round trip reproduces forward output bit-exactly") {
        const auto loaded = load_model(path);
        Tensor x = Tensor::matrix(4, 9);
        Rng rng(77);
        for (double& v : x.data) v = rng.normal();
        const auto a = forward(net, x);
        const auto b = forward(loaded, x);
        CHECK(a.data == b.data);
    }
    SECTION("corrupt magic fails to load") {
        auto bytes = testutil::read_file(path);
        bytes[0] = 'X';
        testutil::write_file(path, bytes);
        CHECK_THROWS_AS(load_model(path), Error);
    }
    SECTION("flipped parameter byte fails the digest") {
        auto bytes = testutil::read_file(path);
        bytes[bytes.size() / 2] ^= 0x40;
        testutil::write_file(path, bytes);
        CHECK_THROWS_AS(load_model(path), Error);
    }
    SECTION("truncated file fails to load") {
        auto bytes = testutil::read_file(path);
        bytes.resize(bytes.size() / 2);
        testutil::write_file(path, bytes);
        CHECK_THROWS_AS(load_model(path), Error);
    }
    SECTION("mismatched dims are rejected by the pipeline") {
        const auto loaded = load_model(path);
        data::SynthConfig config;
        config.points = 60;
        config.tags = {data::TagSpec{}, data::TagSpec{}};
        const auto frame = data::synth_generate(config, 1); // 2 tags, net expects 3
        CHECK_THROWS_AS(predict_frame(loaded, frame, data::WindowSpec{3, 0, 2}), Error);
    }
}

TEST_CASE("network summary lists layers") {
    const auto net = init_network({LayerConfig::dense(8, Activation::Relu), LayerConfig::dense(4)},
                                  2, 2, 2, 0);
    const auto text = summary(net);
    CHECK(text.find("dense") != std::string::npos);
    CHECK(text.find("relu") != std::string::npos);
    CHECK(text.find("8") != std::string::npos);
}
