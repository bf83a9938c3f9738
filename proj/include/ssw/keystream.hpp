#ifndef SSW_KEYSTREAM_HPP
#define SSW_KEYSTREAM_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ssw {

/// 64-bit splitmix-style mixing stream. The recurrence is fixed bit-exactly so
/// that embedder and decoder builds on any platform replay the same sequence.
class KeyStream {
public:
    explicit KeyStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// +1 if bit 63 of the mixed output is set, else -1.
    int next_chip() { return (next_u64() >> 63) ? +1 : -1; }

    /// Uniform in [0,1), 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Zero-mean Laplacian via inverse CDF of the uniform draw.
    double next_laplace(double scale) {
        double u = next_unit();
        // keep the log argument strictly positive
        const double d = u - 0.5;
        double m = 1.0 - 2.0 * std::fabs(d);
        if (m <= 0.0) m = 0x1.0p-53;
        const double n = -scale * std::log(m);
        return d < 0 ? -n : n;
    }

private:
    std::uint64_t state_;
};

/// Keyed +-1 spreading sequence.
struct SpreadSequence {
    std::vector<std::int8_t> chips;
};

inline SpreadSequence generate_chips(std::uint64_t seed, std::size_t count) {
    if (count < 1) throw std::invalid_argument("chip count must be >= 1");
    KeyStream ks(seed);
    SpreadSequence seq;
    seq.chips.resize(count);
    for (auto& c : seq.chips) c = static_cast<std::int8_t>(ks.next_chip());
    return seq;
}

}  // namespace ssw

#endif
