#pragma once
// Versioned binary model file.
//
// Layout (little-endian):
//   8 bytes  magic "FGMODEL1"
//   u32      format version (currently 1)
//   u64 x3   input_len, output_len, tags
//   u32      layer count
//   per layer:  u8 kind, u8 activation, u64 units, f64 rate
//   per dense layer: u64 rows, u64 cols, f64[rows*cols] weight,
//                    u64 len, f64[len] bias
//   u64      fnv1a-64 digest of every byte after the magic
//
// load(save(net)) reproduces forward outputs bit-exactly.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "foreguard/common.hpp"
#include "foreguard/nn/network.hpp"

static_assert(std::endian::native == std::endian::little,
              "model serialization assumes a little-endian host");

namespace foreguard::nn {

namespace detail {

constexpr char kModelMagic[8] = {'F', 'G', 'M', 'O', 'D', 'E', 'L', '1'};
constexpr std::uint32_t kModelVersion = 1;

template <typename T>
void put(std::string& buf, T value) {
    char raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    buf.append(raw, sizeof(T));
}

template <typename T>
T take(const std::string& buf, std::size_t& pos) {
    require(pos + sizeof(T) <= buf.size(), ErrorKind::Parse, "model file truncated");
    T value;
    std::memcpy(&value, buf.data() + pos, sizeof(T));
    pos += sizeof(T);
    return value;
}

} // namespace detail

inline std::string serialize_model(const Network& net) {
    std::string body;
    detail::put<std::uint32_t>(body, detail::kModelVersion);
    detail::put<std::uint64_t>(body, net.input_len);
    detail::put<std::uint64_t>(body, net.output_len);
    detail::put<std::uint64_t>(body, net.tags);
    detail::put<std::uint32_t>(body, static_cast<std::uint32_t>(net.layers.size()));
    for (const auto& layer : net.layers) {
        detail::put<std::uint8_t>(body, static_cast<std::uint8_t>(layer.kind));
        detail::put<std::uint8_t>(body, static_cast<std::uint8_t>(layer.activation));
        detail::put<std::uint64_t>(body, layer.units);
        detail::put<double>(body, layer.rate);
    }
    for (const auto& p : net.params) {
        if (p.empty()) continue;
        detail::put<std::uint64_t>(body, p.weight.rows());
        detail::put<std::uint64_t>(body, p.weight.cols());
        for (double w : p.weight.data) detail::put<double>(body, w);
        detail::put<std::uint64_t>(body, p.bias.size());
        for (double b : p.bias.data) detail::put<double>(body, b);
    }

    std::string out(detail::kModelMagic, sizeof(detail::kModelMagic));
    out += body;
    detail::put<std::uint64_t>(out, fnv1a64(body.data(), body.size()));
    return out;
}

inline void save_model(const Network& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), ErrorKind::Io, strfmt("cannot write model file '%s'", path.c_str()));
    const std::string bytes = serialize_model(net);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    require(out.good(), ErrorKind::Io, strfmt("write failed for '%s'", path.c_str()));
}

inline Network deserialize_model(const std::string& bytes) {
    require(bytes.size() >= sizeof(detail::kModelMagic) + sizeof(std::uint64_t), ErrorKind::Parse,
            "model file truncated");
    require(std::memcmp(bytes.data(), detail::kModelMagic, sizeof(detail::kModelMagic)) == 0,
            ErrorKind::Parse, "not a model file (bad magic)");

    const std::string body =
        bytes.substr(sizeof(detail::kModelMagic), bytes.size() - sizeof(detail::kModelMagic) - 8);
    std::size_t tail = bytes.size() - 8;
    const auto stored_digest = detail::take<std::uint64_t>(bytes, tail);
    require(stored_digest == fnv1a64(body.data(), body.size()), ErrorKind::Parse,
            "model file digest mismatch (corrupt or truncated)");

    std::size_t pos = 0;
    const auto version = detail::take<std::uint32_t>(body, pos);
    require(version == detail::kModelVersion, ErrorKind::Parse,
            strfmt("unsupported model format version %u", version));

    Network net;
    net.input_len = detail::take<std::uint64_t>(body, pos);
    net.output_len = detail::take<std::uint64_t>(body, pos);
    net.tags = detail::take<std::uint64_t>(body, pos);
    const auto n_layers = detail::take<std::uint32_t>(body, pos);
    net.layers.resize(n_layers);
    net.params.resize(n_layers);
    for (auto& layer : net.layers) {
        layer.kind = static_cast<LayerKind>(detail::take<std::uint8_t>(body, pos));
        layer.activation = static_cast<Activation>(detail::take<std::uint8_t>(body, pos));
        layer.units = detail::take<std::uint64_t>(body, pos);
        layer.rate = detail::take<double>(body, pos);
        require(layer_kind_trainable(layer.kind), ErrorKind::Parse,
                "model file names a layer kind this engine cannot run");
    }
    for (std::size_t i = 0; i < n_layers; ++i) {
        if (net.layers[i].kind != LayerKind::Dense) continue;
        const auto rows = detail::take<std::uint64_t>(body, pos);
        const auto cols = detail::take<std::uint64_t>(body, pos);
        require(cols == net.layers[i].units, ErrorKind::Parse, "model file layer width mismatch");
        auto& p = net.params[i];
        p.weight = Tensor::matrix(rows, cols);
        for (double& w : p.weight.data) w = detail::take<double>(body, pos);
        const auto blen = detail::take<std::uint64_t>(body, pos);
        require(blen == cols, ErrorKind::Parse, "model file bias length mismatch");
        p.bias = Tensor({blen});
        for (double& b : p.bias.data) b = detail::take<double>(body, pos);
    }
    require(pos == body.size(), ErrorKind::Parse, "model file has trailing bytes");

    // re-validate the dimension chain
    std::size_t width = net.input_size();
    for (std::size_t i = 0; i < n_layers; ++i) {
        if (net.layers[i].kind != LayerKind::Dense) continue;
        require(net.params[i].weight.rows() == width, ErrorKind::Dimension,
                strfmt("model layer %zu expects input width %zu", i, net.params[i].weight.rows()));
        width = net.params[i].weight.cols();
    }
    require(width == net.output_size(), ErrorKind::Dimension, "model output width mismatch");
    return net;
}

inline Network load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorKind::Io, strfmt("cannot open model file '%s'", path.c_str()));
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_model(bytes);
}

} // namespace foreguard::nn
