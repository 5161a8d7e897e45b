#include "emsrag/common/rng.hpp"

#include <numeric>
#include <stdexcept>

namespace emsrag::rng {

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, SplitMix64& gen) {
    if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    // Partial Fisher-Yates: the first k slots end up holding the sample.
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + gen.index(n - i);
        if (j != i) std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

}  // namespace emsrag::rng
