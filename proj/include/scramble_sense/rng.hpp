#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

// Self-contained counter-style RNG (splitmix64 core).  We avoid the
// <random> distributions on purpose: their output is implementation
// defined, and results here must be byte-identical across platforms and
// worker counts.  Sub-streams are derived from the master seed by hashing
// a label and counter, so any shot / trial / circuit can be generated
// independently of scheduling order.

namespace scrsense {

inline std::uint64_t splitmix64(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    // uniform in [0, 1)
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, bound) without modulo bias
    std::uint64_t uniform_int(std::uint64_t bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    bool bernoulli(double p) { return uniform() < p; }

    double gaussian() {
        // Box-Muller; one value per call keeps the stream simple.
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Independent sub-stream for a labelled purpose + counter.
    Rng stream(std::string_view label, std::uint64_t counter = 0) const {
        std::uint64_t h = state_;
        for (char c : label) {
            h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
            h *= 0x100000001b3ull;
        }
        std::uint64_t s = h;
        splitmix64(s);
        s ^= counter * 0xd1342543de82ef95ull;
        splitmix64(s);
        return Rng(s);
    }

  private:
    std::uint64_t state_;
};

}  // namespace scrsense
