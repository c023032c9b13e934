#pragma once
// Seeded synthetic plant data: a desk-scale stand-in for gated testbed
// datasets. Tags are sines, constants, or random walks with optional
// measurement noise; anomalies are injected as offsets, freezes, or spikes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "foreguard/common.hpp"
#include "foreguard/data/frame.hpp"

namespace foreguard::data {

enum class SignalKind { Sine, Constant, RandomWalk };

struct TagSpec {
    std::string name;                    // empty -> auto "T<g>01" with g = index+1
    SignalKind kind = SignalKind::Sine;
    double amplitude = 1.0;              // sine
    double period = 100.0;               // sine, in timepoints
    double phase = 0.0;                  // sine, radians
    double value = 0.0;                  // constant
    double step_std = 0.05;              // random walk increment sigma
    double noise_std = 0.0;              // additive gaussian on any kind
};

enum class PerturbationKind { Offset, Freeze, Spike };

// Injection interval is half-open [begin, end); the recorded attack interval
// is inclusive (begin, end-1).
struct Injection {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::vector<std::size_t> tags;
    PerturbationKind kind = PerturbationKind::Offset;
    double magnitude = 1.0;
    std::size_t spike_period = 5; // spacing of impulses for Spike
};

struct SynthConfig {
    std::size_t points = 1000;
    double step_seconds = 1.0;
    std::vector<TagSpec> tags;
    std::vector<Injection> injections;

    void validate() const {
        require(points >= 2, ErrorKind::Config, "synthetic config needs points >= 2");
        require(!tags.empty(), ErrorKind::Config, "synthetic config needs at least one tag");
        require(step_seconds > 0.0, ErrorKind::Config, "step_seconds must be positive");
        for (std::size_t j = 0; j < injections.size(); ++j) {
            const auto& inj = injections[j];
            require(inj.begin < inj.end, ErrorKind::Config,
                    strfmt("injection %zu has empty interval", j));
            require(inj.end <= points, ErrorKind::Config,
                    strfmt("injection %zu extends past the series end", j));
            require(!inj.tags.empty(), ErrorKind::Config,
                    strfmt("injection %zu targets no tags", j));
            for (std::size_t i : inj.tags)
                require(i < tags.size(), ErrorKind::Config,
                        strfmt("injection %zu targets unknown tag index %zu", j, i));
            if (inj.kind == PerturbationKind::Spike)
                require(inj.spike_period >= 1, ErrorKind::Config,
                        strfmt("injection %zu has spike_period 0", j));
            for (std::size_t l = 0; l < j; ++l) {
                const auto& other = injections[l];
                require(inj.begin >= other.end || other.begin >= inj.end, ErrorKind::Config,
                        strfmt("injections %zu and %zu overlap", l, j));
            }
        }
    }
};

inline TimeSeriesFrame synth_generate(const SynthConfig& config, std::uint64_t seed) {
    config.validate();
    const std::size_t s = config.points;
    const std::size_t m = config.tags.size();

    TimeSeriesFrame frame;
    frame.timestamps.resize(s);
    for (std::size_t t = 0; t < s; ++t)
        frame.timestamps[t] = static_cast<double>(t) * config.step_seconds;
    frame.values.resize(s * m);
    frame.tag_names.resize(m);

    for (std::size_t i = 0; i < m; ++i) {
        const TagSpec& tag = config.tags[i];
        frame.tag_names[i] =
            tag.name.empty() ? strfmt("T%zu01", i + 1) : tag.name;
        // per-tag stream: adding or reordering tags never disturbs the others
        Rng rng(derive_seed(seed, {0x7461u, i}));
        double walk = 0.0;
        for (std::size_t t = 0; t < s; ++t) {
            double v = 0.0;
            switch (tag.kind) {
                case SignalKind::Sine:
                    v = tag.amplitude *
                        std::sin(2.0 * 3.14159265358979323846 * static_cast<double>(t) / tag.period +
                                 tag.phase);
                    break;
                case SignalKind::Constant:
                    v = tag.value;
                    break;
                case SignalKind::RandomWalk:
                    walk += tag.step_std * rng.normal();
                    v = walk;
                    break;
            }
            if (tag.noise_std > 0.0) v += tag.noise_std * rng.normal();
            frame.at(t, i) = v;
        }
    }

    if (!config.injections.empty()) {
        frame.labels.assign(s, 0);
        for (const auto& inj : config.injections) {
            for (std::size_t t = inj.begin; t < inj.end; ++t) frame.labels[t] = 1;
            AttackInterval iv;
            iv.start = inj.begin;
            iv.end = inj.end - 1;
            for (std::size_t i : inj.tags) {
                iv.target_tags.push_back(frame.tag_names[i]);
                switch (inj.kind) {
                    case PerturbationKind::Offset:
                        for (std::size_t t = inj.begin; t < inj.end; ++t)
                            frame.at(t, i) += inj.magnitude;
                        break;
                    case PerturbationKind::Freeze: {
                        const double held =
                            frame.at(inj.begin > 0 ? inj.begin - 1 : 0, i);
                        for (std::size_t t = inj.begin; t < inj.end; ++t) frame.at(t, i) = held;
                        break;
                    }
                    case PerturbationKind::Spike:
                        for (std::size_t t = inj.begin; t < inj.end; t += inj.spike_period)
                            frame.at(t, i) += inj.magnitude;
                        break;
                }
            }
            frame.attack_intervals.push_back(std::move(iv));
        }
    } else {
        // labels stay absent: an injection-free frame is all-normal by construction
    }

    frame.validate();
    return frame;
}

} // namespace foreguard::data
