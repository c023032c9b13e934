#pragma once
// Pointwise confusion metrics, window-level detection counts, and
// first-detection delays.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "foreguard/common.hpp"
#include "foreguard/metrics/nab.hpp"

namespace foreguard::metrics {

struct PointwiseCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    // 1 when no positives were raised (vacuous precision)
    double precision() const {
        return tp + fp == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    }
    // 1 when the truth holds no anomalous points; this is also the fraction
    // of anomalous time covered by the flags ("anomalous-time coverage")
    double recall() const {
        return tp + fn == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    }
    double f1() const {
        const double p = precision(), r = recall();
        return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    }
};

inline std::vector<std::uint8_t> membership_flags(const GroundTruth& truth) {
    std::vector<std::uint8_t> flags(truth.length, 0);
    for (const auto& w : truth.windows)
        for (std::size_t t = w.start; t <= w.end; ++t) flags[t] = 1;
    return flags;
}

inline PointwiseCounts pointwise_confusion(const GroundTruth& truth,
                                           const std::vector<std::uint8_t>& flags) {
    truth.validate();
    require(flags.size() == truth.length, ErrorKind::Dimension,
            strfmt("flag vector length %zu differs from series length %zu", flags.size(),
                   truth.length));
    const auto member = membership_flags(truth);
    PointwiseCounts out;
    for (std::size_t t = 0; t < flags.size(); ++t) {
        const bool flagged = flags[t] != 0;
        const bool anomalous = member[t] != 0;
        if (flagged && anomalous) ++out.tp;
        else if (flagged) ++out.fp;
        else if (anomalous) ++out.fn;
        else ++out.tn;
    }
    return out;
}

struct WindowDelay {
    std::size_t window = 0;                // index into truth.windows
    std::optional<std::size_t> first_hit;  // earliest in-window detection, if any
    double delay_seconds = 0.0;            // (first_hit - start) * step
    double delay_ratio = 0.0;              // delay / window length
};

struct DelaySummary {
    std::vector<WindowDelay> per_window;
    std::size_t detected = 0;
    std::size_t missed = 0;
    double mean_delay_seconds = 0.0; // over detected windows only
    double mean_delay_ratio = 0.0;   // over detected windows only
};

// detections: strictly increasing timepoints. Window length is its inclusive
// extent, (end - start + 1) * step seconds.
inline DelaySummary detection_delay(const GroundTruth& truth,
                                    const std::vector<std::size_t>& detections,
                                    double step_seconds = 1.0) {
    truth.validate();
    require(step_seconds > 0.0, ErrorKind::Config, "step_seconds must be positive");
    DelaySummary out;
    double delay_sum = 0.0, ratio_sum = 0.0;
    for (std::size_t j = 0; j < truth.windows.size(); ++j) {
        const auto& w = truth.windows[j];
        WindowDelay wd;
        wd.window = j;
        const auto it = std::lower_bound(detections.begin(), detections.end(), w.start);
        if (it != detections.end() && *it <= w.end) {
            wd.first_hit = *it;
            wd.delay_seconds = static_cast<double>(*it - w.start) * step_seconds;
            wd.delay_ratio =
                wd.delay_seconds / (static_cast<double>(w.end - w.start + 1) * step_seconds);
            delay_sum += wd.delay_seconds;
            ratio_sum += wd.delay_ratio;
            ++out.detected;
        } else {
            ++out.missed;
        }
        out.per_window.push_back(wd);
    }
    if (out.detected > 0) {
        out.mean_delay_seconds = delay_sum / static_cast<double>(out.detected);
        out.mean_delay_ratio = ratio_sum / static_cast<double>(out.detected);
    }
    return out;
}

// One detected event reduced to its inclusive extent.
struct DetectedSpan {
    std::size_t start = 0;
    std::size_t end = 0;
};

struct ScoreReport {
    double nab = 0.0;
    PointwiseCounts pointwise;
    double precision = 0.0;
    double recall = 0.0; // anomalous-time coverage
    double f1 = 0.0;
    std::size_t window_tp = 0; // truth windows overlapped by some event
    std::size_t window_fn = 0; // truth windows no event touches
    std::size_t window_fp = 0; // events overlapping no truth window
    DelaySummary delays;
};

inline std::vector<std::uint8_t> flags_from_spans(std::size_t length,
                                                  const std::vector<DetectedSpan>& spans) {
    std::vector<std::uint8_t> flags(length, 0);
    for (const auto& s : spans) {
        require(s.start <= s.end && s.end < length, ErrorKind::Data,
                "detected span outside the series");
        for (std::size_t t = s.start; t <= s.end; ++t) flags[t] = 1;
    }
    return flags;
}

inline std::vector<std::size_t> detections_from_flags(const std::vector<std::uint8_t>& flags) {
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < flags.size(); ++t)
        if (flags[t]) out.push_back(t);
    return out;
}

// Full scoring pass: NAB over every flagged timepoint, pointwise confusion,
// window-level counts, and delays.
inline ScoreReport score_detections(const GroundTruth& truth,
                                    const std::vector<DetectedSpan>& events,
                                    const NabProfile& profile = {}, double step_seconds = 1.0) {
    truth.validate();
    const auto flags = flags_from_spans(truth.length, events);
    const auto detections = detections_from_flags(flags);

    ScoreReport report;
    report.nab = nab_score(truth, detections, profile);
    report.pointwise = pointwise_confusion(truth, flags);
    report.precision = report.pointwise.precision();
    report.recall = report.pointwise.recall();
    report.f1 = report.pointwise.f1();
    report.delays = detection_delay(truth, detections, step_seconds);

    for (const auto& w : truth.windows) {
        bool hit = false;
        for (const auto& ev : events)
            if (ev.start <= w.end && w.start <= ev.end) { hit = true; break; }
        if (hit) ++report.window_tp;
        else ++report.window_fn;
    }
    for (const auto& ev : events) {
        bool hit = false;
        for (const auto& w : truth.windows)
            if (ev.start <= w.end && w.start <= ev.end) { hit = true; break; }
        if (!hit) ++report.window_fp;
    }
    return report;
}

} // namespace foreguard::metrics
