#pragma once

#include <cstdint>

namespace aggsched {

// splitmix64: tiny, fast, and byte-stable across platforms. All randomized
// behaviour in the library (deployments, interleavings, test corpora) draws
// from this so that a seed fully determines the output.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform integer in [lo, hi], inclusive
    int next_int(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next_u64() % span);
    }

    template <class T>
    void shuffle(T* data, int n) {
        for (int i = n - 1; i > 0; --i) {
            const int j = next_int(0, i);
            T tmp = data[i];
            data[i] = data[j];
            data[j] = tmp;
        }
    }

private:
    std::uint64_t state_;
};

}  // namespace aggsched
