#pragma once

#include <cstdint>

namespace sandwich {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Counter-based generator: the i-th draw of stream s under seed k is a pure
/// function of (k, s, i), so chunked parallel consumers reproduce the serial
/// sequence exactly.
class CounterRng {
public:
    constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019ull))) {}

    constexpr std::uint64_t at(std::uint64_t counter) const {
        return mix64(key_ + counter * 0xD1B54A32D192ED03ull);
    }
    /// Uniform in [0, 1) with 53 random bits.
    constexpr double uniform_at(std::uint64_t counter) const {
        return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
    }

    std::uint64_t next() { return at(counter_++); }
    double uniform() { return uniform_at(counter_++); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal via Box-Muller (consumes two draws).
    double normal();

    /// Independent child stream.
    CounterRng split(std::uint64_t stream) const { return CounterRng(key_, stream); }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Radical inverse of `index` in the given prime base (Halton coordinate).
double radical_inverse(std::uint64_t index, unsigned base);

} // namespace sandwich
