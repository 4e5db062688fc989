#pragma once

#include <cstdint>
#include <limits>

namespace cbct {

/// SplitMix64: a small, fast, well-mixed 64-bit generator.  Used as the
/// per-pixel noise engine because it can be seeded O(1) from a hash of
/// (seed, stream, view, pixel), which makes every pixel's random sequence
/// independent of traversal order and thread count.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<std::uint64_t>::max(); }

    result_type operator()() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// One round of the SplitMix64 output function; used to combine words into
/// a seed.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic stream seed for one detector pixel of one view.
/// `stream` partitions independent uses (0 = transmission counts,
/// 1 = open-beam counts, 2 = impulse defects).
inline std::uint64_t pixel_stream_seed(std::uint64_t seed, std::uint64_t stream,
                                       std::uint64_t view, std::uint64_t pixel) {
    std::uint64_t h = seed;
    h = mix64(h + 0x9e3779b97f4a7c15ULL * (stream + 1));
    h = mix64(h + 0x9e3779b97f4a7c15ULL * (view + 1));
    h = mix64(h + 0x9e3779b97f4a7c15ULL * (pixel + 1));
    return h;
}

} // namespace cbct
