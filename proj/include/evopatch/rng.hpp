#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace evopatch {

// Deterministic random source. All randomness in the project flows from one
// root seed through named substreams, so each phase (split, init, train,
// evolve, render) is reproducible on its own. Distributions are hand-rolled
// on top of mt19937_64: the engine's output sequence is pinned by the
// standard, the std:: distributions are not.
class Rng {
public:
    explicit Rng(uint64_t seed) : seed_(seed), gen_(seed) {}

    uint64_t seed() const { return seed_; }

    uint64_t next_u64() { return gen_(); }

    // Uniform integer in [lo, hi], inclusive. Unbiased (rejection sampling).
    int uniform_int(int lo, int hi);
    int64_t uniform_i64(int64_t lo, int64_t hi);

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller with a cached spare.
    double normal(double mean, double stddev);

    bool bernoulli(double p) { return uniform01() < p; }

    // Fisher-Yates; std::shuffle draws in an unspecified way.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(uniform_i64(0, static_cast<int64_t>(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Child seed for a named substream; mixing makes unrelated names
    // produce unrelated streams even for adjacent base seeds.
    static uint64_t derive(uint64_t base, std::string_view name);
    static uint64_t derive(uint64_t base, std::string_view name, uint64_t index);

    Rng substream(std::string_view name) const { return Rng(derive(seed_, name)); }
    Rng substream(std::string_view name, uint64_t index) const {
        return Rng(derive(seed_, name, index));
    }

private:
    uint64_t seed_;
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

uint64_t fnv1a64(std::string_view bytes);

// splitmix64 finalizer; good avalanche for composing seeds with hashes.
uint64_t mix64(uint64_t x);

} // namespace evopatch
