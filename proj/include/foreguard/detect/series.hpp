#pragma once
// Scalar anomaly-score series: weighted p-powered residual mean per
// timepoint, half-life EWMA smoothing, and percentile thresholding.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "foreguard/common.hpp"
#include "foreguard/detect/residual.hpp"

namespace foreguard::detect {

struct ErrorConfig {
    double power = 6.0;          // residual exponent p >= 1
    std::size_t half_life = 1;   // EWMA half-life H >= 1, in timepoints
    bool use_weights = true;     // apply per-tag weights from tag_weights()
    bool smooth = true;          // apply EWMA after the per-timepoint reduction

    void validate() const {
        require(power >= 1.0, ErrorKind::Config, "error power must be >= 1");
        require(half_life >= 1, ErrorKind::Config, "half-life must be >= 1");
    }
};

// M_t = (1/m) * sum_i w_i * E[t][i]^p. Pass no weights for the unweighted
// form (w_i = 1), which with p = 1 is the plain mean absolute error.
inline std::vector<double> weighted_power_error(const ResidualMatrix& e, double power,
                                                const TagWeights* weights = nullptr) {
    require(power >= 1.0, ErrorKind::Config, "error power must be >= 1");
    if (weights)
        require(weights->tags() == e.tags, ErrorKind::Dimension,
                "weight vector length differs from tag count");
    std::vector<double> out(e.points);
    const double inv_m = 1.0 / static_cast<double>(e.tags);
    for (std::size_t t = 0; t < e.points; ++t) {
        double acc = 0.0;
        for (std::size_t i = 0; i < e.tags; ++i) {
            const double r = e.at(t, i);
            const double powered = power == 1.0 ? r : std::pow(r, power);
            acc += (weights ? weights->w[i] : 1.0) * powered;
        }
        out[t] = acc * inv_m;
    }
    return out;
}

inline double half_life_alpha(std::size_t half_life) {
    return 1.0 - std::exp(std::log(0.5) / static_cast<double>(half_life));
}

// Exponentially weighted moving average with out[0] = 0:
//   out[t] = alpha * in[t] + (1 - alpha) * out[t-1],
//   alpha = 1 - exp(ln(0.5) / H).
// A unit impulse decays by exactly half every H steps.
inline std::vector<double> ewma(std::span<const double> series, std::size_t half_life) {
    require(half_life >= 1, ErrorKind::Config, "half-life must be >= 1");
    std::vector<double> out(series.size());
    if (out.empty()) return out;
    const double alpha = half_life_alpha(half_life);
    out[0] = 0.0;
    for (std::size_t t = 1; t < series.size(); ++t)
        out[t] = alpha * series[t] + (1.0 - alpha) * out[t - 1];
    return out;
}

// The full transform chain. With weights off, p = 1 and smoothing off this
// reduces exactly to the per-timepoint mean absolute residual.
inline std::vector<double> error_series(const ResidualMatrix& e, const ErrorConfig& config,
                                        const TagWeights* weights = nullptr) {
    config.validate();
    auto series = weighted_power_error(e, config.power, config.use_weights ? weights : nullptr);
    if (config.smooth) series = ewma(series, config.half_life);
    return series;
}

// T = 99th percentile (linear interpolation between order statistics) of the
// processed series. Callers pass the forecastable slice of the training
// series only.
inline double fit_threshold(std::span<const double> train_series, double q = 99.0) {
    require(!train_series.empty(), ErrorKind::Data, "cannot fit a threshold on an empty series");
    return percentile(train_series, q);
}

} // namespace foreguard::detect
