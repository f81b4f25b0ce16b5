#pragma once

#include <cstdint>
#include <vector>

namespace cgs::util {

// splitmix64: tiny deterministic generator, identical output on every
// platform (std distributions are not portable across standard libraries).
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound)
    uint64_t next_below(uint64_t bound) { return bound == 0 ? 0 : next_u64() % bound; }

    // Uniform in [lo, hi)
    double next_double(double lo, double hi) {
        double u = static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
        return lo + u * (hi - lo);
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (size_t i = items.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(next_below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    uint64_t state_;
};

inline uint64_t mix_seed(uint64_t a, uint64_t b) {
    Rng rng(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
    return rng.next_u64();
}

}  // namespace cgs::util
