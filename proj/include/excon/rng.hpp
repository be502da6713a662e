#pragma once

#include <cstddef>
#include <cstdint>

namespace excon {

/// Counter-based generator built on the SplitMix64 finalizer. Draw k of the
/// stream (seed, stream) is splitmix64(key + (k + 1) * 0x9E3779B97F4A7C15)
/// where key = splitmix64(seed ^ splitmix64(stream)). Outputs depend only on
/// (seed, stream, k), so Monte Carlo trial i always consumes stream i no
/// matter which thread runs it.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Exp(1) by inversion.
    double exponential();

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace excon
