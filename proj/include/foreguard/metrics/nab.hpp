#pragma once
// Early-detection benchmark score. Each truth window rewards its earliest
// in-window detection through a scaled sigmoid of the relative position
// (window start -> maximum credit, window end -> zero reward). Detections
// outside every window are penalized with the same sigmoid shape decaying
// toward the flat false-positive penalty; missed windows cost the
// false-negative weight. The raw total is affinely normalized so that an
// empty detection set scores exactly 0 and one detection at each window
// start scores exactly 100. Heavy false-positive traffic can push the score
// negative.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "foreguard/common.hpp"

namespace foreguard::metrics {

// Inclusive anomaly extent used for scoring.
struct TruthWindow {
    std::size_t start = 0;
    std::size_t end = 0;
};

struct GroundTruth {
    std::size_t length = 0; // S
    std::vector<TruthWindow> windows;

    void validate() const {
        for (std::size_t j = 0; j < windows.size(); ++j) {
            const auto& w = windows[j];
            require(w.start <= w.end && w.end < length, ErrorKind::Data,
                    strfmt("truth window %zu outside [0, %zu)", j, length));
            if (j > 0)
                require(windows[j - 1].end < w.start, ErrorKind::Data,
                        strfmt("truth windows %zu and %zu overlap or are unsorted", j - 1, j));
        }
    }
};

struct NabProfile {
    double a_tp = 1.0;  // reward weight for a detected window
    double a_fp = 0.11; // penalty weight per false-positive detection
    double a_fn = 1.0;  // penalty weight per missed window

    void validate() const {
        require(a_tp > 0.0, ErrorKind::Config, "profile a_tp must be positive");
        require(a_fp >= 0.0 && a_fn >= 0.0, ErrorKind::Config,
                "profile penalties must be non-negative");
    }
};

namespace detail {

// 2*sigmoid(-5*pos) - 1: +0.9866 at pos -1, 0 at pos 0, negative past the
// window, saturating at -1 beyond three window lengths.
inline double scaled_sigmoid(double relative_position) {
    if (relative_position > 3.0) return -1.0;
    return 2.0 / (1.0 + std::exp(5.0 * relative_position)) - 1.0;
}

inline double window_span(const TruthWindow& w) {
    return std::max<double>(static_cast<double>(w.end - w.start), 1.0);
}

} // namespace detail

// detections: strictly increasing timepoints within [0, truth.length).
inline double nab_score(const GroundTruth& truth, const std::vector<std::size_t>& detections,
                        const NabProfile& profile = {}) {
    truth.validate();
    profile.validate();
    for (std::size_t j = 0; j < detections.size(); ++j) {
        require(detections[j] < truth.length, ErrorKind::Data, "detection outside the series");
        if (j > 0)
            require(detections[j - 1] < detections[j], ErrorKind::Data,
                    "detections must be strictly increasing");
    }

    double raw = 0.0;
    std::size_t d = 0;
    const TruthWindow* prev = nullptr; // latest window fully before the cursor
    const auto false_positive = [&](std::size_t t) {
        if (!prev) {
            raw -= profile.a_fp; // no preceding window: full flat penalty
            return;
        }
        const double pos = static_cast<double>(t - prev->end) / detail::window_span(*prev);
        raw += profile.a_fp * detail::scaled_sigmoid(pos); // negative
    };

    for (const auto& w : truth.windows) {
        for (; d < detections.size() && detections[d] < w.start; ++d)
            false_positive(detections[d]);
        bool detected = false;
        for (; d < detections.size() && detections[d] <= w.end; ++d) {
            if (detected) continue; // later in-window detections earn nothing
            detected = true;
            const double pos = w.end == w.start
                                   ? -1.0
                                   : -static_cast<double>(w.end - detections[d]) /
                                         detail::window_span(w);
            raw += profile.a_tp * detail::scaled_sigmoid(pos);
        }
        if (!detected) raw -= profile.a_fn;
        prev = &w;
    }
    for (; d < detections.size(); ++d) false_positive(detections[d]);

    const double per_window_perfect = profile.a_tp * detail::scaled_sigmoid(-1.0);
    const auto window_count = static_cast<double>(truth.windows.size());
    const double raw_null = -profile.a_fn * window_count;
    const double raw_perfect = per_window_perfect * window_count;
    if (truth.windows.empty()) {
        // degenerate truth: anchor both references at 0 and scale any
        // false-positive deficit by the single-window span
        return 100.0 * raw / (per_window_perfect + profile.a_fn);
    }
    return 100.0 * (raw - raw_null) / (raw_perfect - raw_null);
}

} // namespace foreguard::metrics
