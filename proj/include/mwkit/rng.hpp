#pragma once

#include <cstdint>

namespace mwkit {

// splitmix64: tiny deterministic generator, identical output on every
// platform. Suites derive one stream per trial from (seed, trial index) so
// scheduling cannot change results.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound)
    uint64_t below(uint64_t bound) {
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // uniform in [lo, hi] inclusive
    int64_t range(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    bool flip() { return next() & 1; }

  private:
    uint64_t state_;
};

inline Rng trial_rng(uint64_t seed, uint64_t index) {
    Rng mix(seed ^ (0x517cc1b727220a95ULL * (index + 1)));
    mix.next();
    return mix;
}

}  // namespace mwkit
