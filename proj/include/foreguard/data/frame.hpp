#pragma once
// Uniform-grid multivariate time-series container.

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "foreguard/common.hpp"

namespace foreguard::data {

// A labeled anomaly extent. Indices are inclusive on both ends.
struct AttackInterval {
    std::size_t start = 0;
    std::size_t end = 0;
    std::vector<std::string> target_tags; // may be empty when unknown

    bool contains(std::size_t t) const { return t >= start && t <= end; }
};

/// S timepoints x m tags, row-major. Timestamps are seconds; after
/// resampling the spacing is exactly constant. Frames are immutable by
/// convention once built and safe to share across threads read-only.
struct TimeSeriesFrame {
    std::vector<double> timestamps;        // strictly increasing, size S
    std::vector<double> values;            // S * m, row-major
    std::vector<std::string> tag_names;    // size m
    std::vector<std::uint8_t> labels;      // empty, or size S (0 normal / 1 attack)
    std::vector<AttackInterval> attack_intervals;

    std::size_t points() const { return timestamps.size(); }
    std::size_t tags() const { return tag_names.size(); }

    double at(std::size_t t, std::size_t i) const { return values[t * tags() + i]; }
    double& at(std::size_t t, std::size_t i) { return values[t * tags() + i]; }

    std::span<const double> row(std::size_t t) const {
        return {values.data() + t * tags(), tags()};
    }

    bool has_labels() const { return !labels.empty(); }

    void validate() const {
        const std::size_t s = points();
        const std::size_t m = tags();
        require(values.size() == s * m, ErrorKind::Dimension,
                strfmt("frame holds %zu values, expected %zu x %zu", values.size(), s, m));
        for (std::size_t t = 1; t < s; ++t)
            require(timestamps[t] > timestamps[t - 1], ErrorKind::Data,
                    strfmt("timestamps not strictly increasing at row %zu", t));
        for (double v : values)
            require(std::isfinite(v), ErrorKind::Data, "non-finite value in frame");
        if (!labels.empty())
            require(labels.size() == s, ErrorKind::Dimension, "label column length mismatch");
        for (const auto& iv : attack_intervals) {
            require(iv.start <= iv.end, ErrorKind::Data, "attack interval with start > end");
            require(iv.end < s, ErrorKind::Data, "attack interval outside frame");
        }
    }

    // Drop the first n rows (plant warm-up trim). Labels and intervals shift.
    TimeSeriesFrame head_trimmed(std::size_t n) const {
        require(n < points(), ErrorKind::Data, "head trim removes the whole frame");
        TimeSeriesFrame out;
        out.tag_names = tag_names;
        out.timestamps.assign(timestamps.begin() + static_cast<std::ptrdiff_t>(n), timestamps.end());
        out.values.assign(values.begin() + static_cast<std::ptrdiff_t>(n * tags()), values.end());
        if (!labels.empty())
            out.labels.assign(labels.begin() + static_cast<std::ptrdiff_t>(n), labels.end());
        for (const auto& iv : attack_intervals) {
            if (iv.end < n) continue;
            AttackInterval moved = iv;
            moved.start = iv.start > n ? iv.start - n : 0;
            moved.end = iv.end - n;
            out.attack_intervals.push_back(std::move(moved));
        }
        return out;
    }
};

// Collapse contiguous runs of label==1 into inclusive intervals.
inline std::vector<AttackInterval> intervals_from_labels(const std::vector<std::uint8_t>& labels) {
    std::vector<AttackInterval> out;
    std::size_t t = 0;
    while (t < labels.size()) {
        if (labels[t]) {
            AttackInterval iv;
            iv.start = t;
            while (t + 1 < labels.size() && labels[t + 1]) ++t;
            iv.end = t;
            out.push_back(std::move(iv));
        }
        ++t;
    }
    return out;
}

} // namespace foreguard::data
