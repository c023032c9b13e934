#pragma once
// Threshold exceedance events and per-event tag diagnosis.

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "foreguard/common.hpp"
#include "foreguard/detect/residual.hpp"
#include "foreguard/detect/series.hpp"

namespace foreguard::detect {

struct SuspectTag {
    std::size_t tag = 0;
    double score = 0.0;          // max over event of w_i * E[t][i]^p (scaled units)
    double peak_residual = 0.0;  // max |residual| over the event, scaled units
};

struct AnomalyEvent {
    std::size_t start = 0; // inclusive
    std::size_t end = 0;   // inclusive
    double peak_value = 0.0;
    std::size_t peak_time = 0;
    std::vector<SuspectTag> suspects; // ranked, filled by diagnose()

    std::size_t duration() const { return end - start + 1; }
};

// Maximal contiguous runs with series[t] >= threshold.
inline std::vector<AnomalyEvent> detect_events(std::span<const double> series, double threshold) {
    require(std::isfinite(threshold), ErrorKind::Config, "threshold must be finite");
    std::vector<AnomalyEvent> events;
    std::size_t t = 0;
    while (t < series.size()) {
        if (series[t] >= threshold) {
            AnomalyEvent ev;
            ev.start = t;
            ev.peak_value = series[t];
            ev.peak_time = t;
            while (t + 1 < series.size() && series[t + 1] >= threshold) {
                ++t;
                if (series[t] > ev.peak_value) {
                    ev.peak_value = series[t];
                    ev.peak_time = t;
                }
            }
            ev.end = t;
            events.push_back(std::move(ev));
        }
        ++t;
    }
    return events;
}

// Rank tags inside each event by the same per-tag contribution that drove
// detection: max over the event's timepoints of w_i * E[t][i]^p. Ties break
// toward the lower tag index. top_k is clamped to the tag count.
inline void diagnose(const ResidualMatrix& e, std::vector<AnomalyEvent>& events,
                     const ErrorConfig& config, const TagWeights* weights, std::size_t top_k) {
    require(top_k >= 1, ErrorKind::Config, "diagnosis top_k must be >= 1");
    const std::size_t m = e.tags;
    const std::size_t k = std::min(top_k, m);
    std::vector<double> score(m);
    std::vector<double> peak(m);
    std::vector<std::size_t> order(m);
    for (auto& ev : events) {
        require(ev.end < e.points, ErrorKind::Dimension, "event extends past the residual matrix");
        std::fill(score.begin(), score.end(), 0.0);
        std::fill(peak.begin(), peak.end(), 0.0);
        for (std::size_t t = ev.start; t <= ev.end; ++t) {
            for (std::size_t i = 0; i < m; ++i) {
                const double r = e.at(t, i);
                const double w = (config.use_weights && weights) ? weights->w[i] : 1.0;
                const double contribution =
                    w * (config.power == 1.0 ? r : std::pow(r, config.power));
                score[i] = std::max(score[i], contribution);
                peak[i] = std::max(peak[i], r);
            }
        }
        for (std::size_t i = 0; i < m; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (score[a] != score[b]) return score[a] > score[b];
            return a < b;
        });
        ev.suspects.clear();
        ev.suspects.reserve(k);
        for (std::size_t j = 0; j < k; ++j)
            ev.suspects.push_back({order[j], score[order[j]], peak[order[j]]});
    }
}

// Subprocess group heuristic for reports: the first digit appearing in a tag
// name names its plant subprocess; '-' when the name carries no digit.
inline char subprocess_group(const std::string& tag_name) {
    for (char c : tag_name)
        if (c >= '0' && c <= '9') return c;
    return '-';
}

} // namespace foreguard::detect
