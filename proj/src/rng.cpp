#include "evopatch/rng.hpp"

#include <cassert>
#include <cmath>

namespace evopatch {

uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

uint64_t Rng::derive(uint64_t base, std::string_view name) {
    return mix64(base ^ fnv1a64(name));
}

uint64_t Rng::derive(uint64_t base, std::string_view name, uint64_t index) {
    return mix64(derive(base, name) + 0x632be59bd9b4e019ull * (index + 1));
}

int64_t Rng::uniform_i64(int64_t lo, int64_t hi) {
    assert(lo <= hi);
    const uint64_t span = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo) + 1;
    if (span == 0) { // full 64-bit range
        return static_cast<int64_t>(next_u64());
    }
    // Reject the tail that would bias the modulus.
    const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return lo + static_cast<int64_t>(x % span);
}

int Rng::uniform_int(int lo, int hi) {
    return static_cast<int>(uniform_i64(lo, hi));
}

double Rng::normal(double mean, double stddev) {
    if (has_spare_) {
        has_spare_ = false;
        return mean + stddev * spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return mean + stddev * u * m;
}

} // namespace evopatch
