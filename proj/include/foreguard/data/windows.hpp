#pragma once
// Sliding-window geometry: input windows of length L, a forecast horizon h,
// and forecast windows of length F tiling the timeline with stride F.

#include <cstddef>
#include <vector>

#include "foreguard/common.hpp"
#include "foreguard/data/frame.hpp"

namespace foreguard::data {

struct WindowSpec {
    std::size_t input_len = 1;    // L
    std::size_t horizon = 0;      // h
    std::size_t forecast_len = 1; // F

    void validate() const {
        require(input_len >= 1, ErrorKind::Config, "window input_len must be >= 1");
        require(forecast_len >= 1, ErrorKind::Config, "window forecast_len must be >= 1");
    }

    // index of the first forecastable timepoint
    std::size_t lead() const { return input_len + horizon; }

    // number of complete window pairs for a series of s points
    std::size_t count(std::size_t s) const {
        if (s < lead() + forecast_len) return 0;
        return (s - lead()) / forecast_len;
    }

    std::size_t min_points() const { return lead() + forecast_len; }
};

// Concrete index ranges of one input/forecast pair. Ranges are half-open.
struct WindowPair {
    std::size_t k = 0;
    std::size_t input_begin = 0;  // [input_begin, input_begin + L)
    std::size_t target_begin = 0; // [target_begin, target_begin + F)
};

// Pair k reads rows [k*F, k*F+L) and predicts rows [L+h+k*F, L+h+(k+1)*F).
// Consecutive target ranges tile [L+h, L+h+K*F) with no gaps or overlaps.
inline std::vector<WindowPair> make_windows(std::size_t points, const WindowSpec& spec) {
    spec.validate();
    const std::size_t k = spec.count(points);
    require(k >= 1, ErrorKind::Data,
            strfmt("series of %zu points is too short for windows (need at least %zu)",
                   points, spec.min_points()));
    std::vector<WindowPair> out(k);
    for (std::size_t i = 0; i < k; ++i) {
        out[i].k = i;
        out[i].input_begin = i * spec.forecast_len;
        out[i].target_begin = spec.lead() + i * spec.forecast_len;
    }
    return out;
}

inline std::vector<WindowPair> make_windows(const TimeSeriesFrame& frame, const WindowSpec& spec) {
    return make_windows(frame.points(), spec);
}

} // namespace foreguard::data
