#pragma once

#include <cmath>
#include <cstdint>

namespace rxn {

// SplitMix64 (Steele, Lea, Flood 2014). Used to expand seeds and to derive
// independent replicate streams from (base_seed, stream_index).
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256++ (Blackman, Vigna 2019). Fully specified here so trajectories
// are bit-identical across platforms and standard libraries; the name is
// recorded in output metadata.
class Xoshiro256pp {
public:
    static constexpr const char* kName = "xoshiro256++/splitmix64";

    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& word : s_) word = sm.next();
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe as the argument of std::log.
    double next_open_double() { return 1.0 - next_double(); }

    // Exponential waiting time with the given rate.
    double next_exponential(double rate) { return -std::log(next_open_double()) / rate; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
};

// Stream for replicate `index` of an ensemble. Streams are derived by
// hashing (base_seed, index), not by sequential jumps, so the result does
// not depend on the order replicates are launched in.
inline std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::uint64_t index) {
    SplitMix64 sm(base_seed ^ ((index + 1) * 0x9e3779b97f4a7c15ULL));
    return sm.next();
}

inline Xoshiro256pp replicate_stream(std::uint64_t base_seed, std::uint64_t index) {
    return Xoshiro256pp(derive_stream_seed(base_seed, index));
}

} // namespace rxn
