#pragma once
// Forecast residuals and per-tag predictability weights.

#include <cmath>
#include <cstddef>
#include <vector>

#include "foreguard/common.hpp"
#include "foreguard/data/frame.hpp"
#include "foreguard/nn/tensor.hpp"

namespace foreguard::detect {

/// E[t][i] = |forecast - actual| for tag i at timepoint t. Rows before the
/// first forecastable timepoint are zero because the forecast copies actuals.
struct ResidualMatrix {
    std::size_t points = 0;
    std::size_t tags = 0;
    std::vector<double> e; // row-major, points x tags

    double at(std::size_t t, std::size_t i) const { return e[t * tags + i]; }
    double& at(std::size_t t, std::size_t i) { return e[t * tags + i]; }
};

inline ResidualMatrix residuals(const data::TimeSeriesFrame& actual, const nn::Tensor& forecast) {
    require(forecast.rank() == 2 && forecast.rows() == actual.points() &&
                forecast.cols() == actual.tags(),
            ErrorKind::Dimension, "forecast matrix shape differs from frame");
    ResidualMatrix out;
    out.points = actual.points();
    out.tags = actual.tags();
    out.e.resize(out.points * out.tags);
    for (std::size_t j = 0; j < out.e.size(); ++j)
        out.e[j] = std::abs(forecast.data[j] - actual.values[j]);
    return out;
}

/// Positive per-tag weights that sum to 1. Predictable tags (small residual
/// percentile relative to the worst observed error) get large weights.
struct TagWeights {
    std::vector<double> w;

    std::size_t tags() const { return w.size(); }
};

// Weights from training residuals, rows [row_begin, row_end):
//   eps_i  = 99th percentile of tag i residuals
//   E      = max(max residual, 1e-8)
//   ratio_i = clamp(eps_i / E, 1e-8, 1 - 1e-12)
//   w_i    = -ln(ratio_i), normalized to sum 1.
// The upper clamp keeps every weight strictly positive even when a tag's
// percentile coincides with the global maximum. An all-zero matrix floors
// every ratio and yields uniform weights.
inline TagWeights tag_weights(const ResidualMatrix& train, std::size_t row_begin,
                              std::size_t row_end) {
    require(row_begin < row_end && row_end <= train.points, ErrorKind::Data,
            "tag_weights: empty or out-of-range row window");
    const std::size_t m = train.tags;
    const std::size_t rows = row_end - row_begin;

    double max_error = 0.0;
    for (std::size_t t = row_begin; t < row_end; ++t)
        for (std::size_t i = 0; i < m; ++i) max_error = std::max(max_error, train.at(t, i));
    max_error = std::max(max_error, 1e-8);

    TagWeights out;
    out.w.resize(m);
    std::vector<double> column(rows);
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t t = 0; t < rows; ++t) column[t] = train.at(row_begin + t, i);
        const double eps = percentile(column, 99.0);
        const double ratio = std::clamp(eps / max_error, 1e-8, 1.0 - 1e-12);
        out.w[i] = -std::log(ratio);
        sum += out.w[i];
    }
    for (double& w : out.w) w /= sum;
    return out;
}

inline TagWeights tag_weights(const ResidualMatrix& train) {
    return tag_weights(train, 0, train.points);
}

inline TagWeights uniform_weights(std::size_t tags) {
    TagWeights out;
    out.w.assign(tags, 1.0 / static_cast<double>(tags));
    return out;
}

} // namespace foreguard::detect
