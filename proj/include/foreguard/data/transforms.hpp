#pragma once
// Grid resampling and per-tag standardization.

#include <cmath>
#include <cstddef>
#include <vector>

#include "foreguard/common.hpp"
#include "foreguard/data/frame.hpp"

namespace foreguard::data {

// Re-interpolate onto an arithmetic grid t0, t0+step, ... spanning the input
// range. Values are linearly interpolated per tag; labels are carried by
// nearest neighbor (ties resolve to the earlier point). Idempotent on input
// that is already uniform with the same step.
inline TimeSeriesFrame resample_uniform(const TimeSeriesFrame& frame, double step) {
    require(step > 0.0, ErrorKind::Config, "resample step must be positive");
    require(frame.points() >= 2, ErrorKind::Data, "resampling needs at least 2 timepoints");

    const std::size_t m = frame.tags();
    const double t0 = frame.timestamps.front();
    const double t_last = frame.timestamps.back();
    const auto grid_points = static_cast<std::size_t>(std::floor((t_last - t0) / step)) + 1;

    TimeSeriesFrame out;
    out.tag_names = frame.tag_names;
    out.timestamps.resize(grid_points);
    out.values.resize(grid_points * m);
    if (frame.has_labels()) out.labels.resize(grid_points);

    std::size_t seg = 0; // current source segment [seg, seg+1]
    for (std::size_t k = 0; k < grid_points; ++k) {
        const double t = t0 + static_cast<double>(k) * step;
        out.timestamps[k] = t;
        while (seg + 2 < frame.points() && frame.timestamps[seg + 1] <= t) ++seg;
        const double ta = frame.timestamps[seg];
        const double tb = frame.timestamps[seg + 1];
        if (t <= ta) {
            for (std::size_t i = 0; i < m; ++i) out.at(k, i) = frame.at(seg, i);
            if (frame.has_labels()) out.labels[k] = frame.labels[seg];
        } else if (t >= tb) {
            for (std::size_t i = 0; i < m; ++i) out.at(k, i) = frame.at(seg + 1, i);
            if (frame.has_labels()) out.labels[k] = frame.labels[seg + 1];
        } else {
            const double frac = (t - ta) / (tb - ta);
            for (std::size_t i = 0; i < m; ++i)
                out.at(k, i) = frame.at(seg, i) + frac * (frame.at(seg + 1, i) - frame.at(seg, i));
            if (frame.has_labels())
                out.labels[k] = (t - ta <= tb - t) ? frame.labels[seg] : frame.labels[seg + 1];
        }
    }
    if (frame.has_labels()) out.attack_intervals = intervals_from_labels(out.labels);
    out.validate();
    return out;
}

/// Per-tag mean and population standard deviation. Zero-variance tags store
/// std = 1 so they pass through centered and stay available for diagnosis.
struct ScalingStats {
    std::vector<double> mean;
    std::vector<double> std;

    std::size_t tags() const { return mean.size(); }
};

// Fit on the training (normal-operation) split only; reuse on test data.
inline ScalingStats fit_scaler(const TimeSeriesFrame& frame) {
    const std::size_t s = frame.points();
    const std::size_t m = frame.tags();
    require(s > 0, ErrorKind::Data, "cannot fit scaler on an empty frame");

    ScalingStats stats;
    stats.mean.assign(m, 0.0);
    stats.std.assign(m, 0.0);
    for (std::size_t t = 0; t < s; ++t)
        for (std::size_t i = 0; i < m; ++i) stats.mean[i] += frame.at(t, i);
    for (std::size_t i = 0; i < m; ++i) stats.mean[i] /= static_cast<double>(s);
    for (std::size_t t = 0; t < s; ++t)
        for (std::size_t i = 0; i < m; ++i) {
            const double d = frame.at(t, i) - stats.mean[i];
            stats.std[i] += d * d;
        }
    for (std::size_t i = 0; i < m; ++i) {
        stats.std[i] = std::sqrt(stats.std[i] / static_cast<double>(s));
        if (stats.std[i] == 0.0) stats.std[i] = 1.0;
    }
    return stats;
}

inline TimeSeriesFrame apply_scaler(const TimeSeriesFrame& frame, const ScalingStats& stats) {
    require(stats.tags() == frame.tags(), ErrorKind::Dimension,
            strfmt("scaler covers %zu tags, frame has %zu", stats.tags(), frame.tags()));
    TimeSeriesFrame out = frame;
    const std::size_t m = frame.tags();
    for (std::size_t t = 0; t < frame.points(); ++t)
        for (std::size_t i = 0; i < m; ++i)
            out.at(t, i) = (frame.at(t, i) - stats.mean[i]) / stats.std[i];
    return out;
}

} // namespace foreguard::data
