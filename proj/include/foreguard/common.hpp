#pragma once
// Shared primitives: error type, deterministic RNG, percentile, small helpers.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace foreguard {

inline const char* version() {
#ifdef FOREGUARD_VERSION
    return FOREGUARD_VERSION;
#else
    return "0.0.0";
#endif
}

enum class ErrorKind {
    Config,       // bad configuration / schema / validation
    Parse,        // malformed input file
    Dimension,    // tensor or layer shape mismatch
    Data,         // insufficient or inconsistent data
    Training,     // divergence or invalid training state
    Io,           // filesystem failures
    Unimplemented // recognized but unsupported option
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline void require(bool ok, ErrorKind kind, const std::string& message) {
    if (!ok) fail(kind, message);
}

// printf-style formatting into std::string (gcc 11 lacks <format>).
inline std::string strfmt(const char* fmt, ...) {
    va_list args;
    va_start(args, fmt);
    va_list copy;
    va_copy(copy, args);
    const int n = std::vsnprintf(nullptr, 0, fmt, copy);
    va_end(copy);
    std::string out(static_cast<std::size_t>(n), '\0');
    std::vsnprintf(out.data(), out.size() + 1, fmt, args);
    va_end(args);
    return out;
}

// Shortest decimal form that round-trips a double. Keeps emitted CSV/JSON
// byte-stable across runs.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    for (int prec = 1; prec <= 17; ++prec) {
        std::string s = strfmt("%.*g", prec, v);
        if (std::strtod(s.c_str(), nullptr) == v) return s;
    }
    return strfmt("%.17g", v);
}

// -- deterministic randomness -------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Derive a child seed from a root seed and a stream of salts. Used to give
// independent deterministic streams to dataset splits, GA slots, etc.
inline std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> salts) {
    std::uint64_t h = splitmix64(root);
    for (std::uint64_t s : salts) h = splitmix64(h ^ splitmix64(s));
    return h;
}

// mt19937_64 with fully specified draw functions, so a fixed seed yields the
// same sequence regardless of standard-library distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [lo, hi] inclusive
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(engine_()); // full range
        // rejection sampling to avoid modulo bias
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t x;
        do { x = engine_(); } while (x >= limit);
        return lo + static_cast<std::int64_t>(x % span);
    }

    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(n) - 1));
    }

    bool coin() { return (engine_() & 1ull) != 0; }

    // standard normal via Box-Muller (no cached spare; keeps state trivial)
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    std::string serialize_state() const {
        std::ostringstream os;
        os << engine_;
        return os.str();
    }

    void restore_state(const std::string& s) {
        std::istringstream is(s);
        is >> engine_;
        require(!is.fail(), ErrorKind::Parse, "invalid rng state string");
    }

private:
    std::mt19937_64 engine_;
};

// -- order statistics ---------------------------------------------------------

// Percentile with linear interpolation between order statistics:
// position = q/100 * (n-1). percentile({1..100}, 99) == 99.01.
inline double percentile(std::span<const double> values, double q) {
    require(!values.empty(), ErrorKind::Data, "percentile of an empty series");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.size() == 1) return sorted.front();
    const double pos = std::clamp(q, 0.0, 100.0) / 100.0 * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

// -- hashing ------------------------------------------------------------------

// FNV-1a 64-bit; used for manifest content digests and model file integrity.
inline std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t fnv1a64(std::string_view s) { return fnv1a64(s.data(), s.size()); }

} // namespace foreguard
