#ifndef GPLAB_PRNG_HPP
#define GPLAB_PRNG_HPP

#include <cstdint>

namespace gplab {

// splitmix64: tiny, fully specified, byte-stable across platforms.  Used for
// the corpus generator and randomized property tests so reruns are
// reproducible from the seed alone.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n) by rejection; n > 0.
    uint64_t below(uint64_t n) {
        uint64_t limit = ~0ull - (~0ull % n);
        uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % n;
    }
};

}  // namespace gplab

#endif
