#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace emsrag::rng {

// splitmix64 stream. Used wherever reproducibility matters (weight init,
// shuffling, sampling, synthetic fixtures) so results do not depend on the
// standard library's distribution implementations.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform index in [0, n). Requires n > 0.
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(next() % n); }

    // Standard normal via Box-Muller (pairs cached).
    double gaussian() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(theta);
        has_cached_ = true;
        return r * std::cos(theta);
    }

private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// In-place Fisher-Yates shuffle driven by the splitmix stream.
template <typename T>
void shuffle(std::vector<T>& items, SplitMix64& gen) {
    if (items.size() < 2) return;
    for (std::size_t i = items.size() - 1; i > 0; --i) {
        const std::size_t j = gen.index(i + 1);
        if (j != i) std::swap(items[i], items[j]);
    }
}

// k distinct indices drawn uniformly from [0, n), in selection order.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, SplitMix64& gen);

}  // namespace emsrag::rng
