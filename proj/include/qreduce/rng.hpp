#pragma once

#include <cstdint>
#include <random>

namespace qreduce {

// SplitMix64 step; the output sequence is fully specified, so derived seeds
// are portable across platforms and standard library implementations.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seedable generator with a documented stream-splitting rule:
// stream k of seed s is mt19937_64 seeded with the (k+1)-th SplitMix64
// output of state s. Stream 0 is the default sampling stream; protocols
// that need several independent streams (e.g. one per measurement stage)
// take consecutive stream ids. Uniform doubles use the 53-bit multiply,
// never std::uniform_real_distribution, so that identical seeds give
// bit-identical draws everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
        std::uint64_t state = seed;
        std::uint64_t derived = 0;
        for (std::uint64_t i = 0; i <= stream_id; ++i) {
            derived = splitmix64_next(state);
        }
        return Rng(derived);
    }

    std::uint64_t next() { return gen_(); }

    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace qreduce
