#include "tchm/rng.hpp"

#include <cmath>

namespace tchm {

namespace {

constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kSeedStreamGamma = 0xD1B54A32D192ED03ULL;

// Stafford mix13 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

}  // namespace

std::uint64_t CounterRng::next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * kSplitMixGamma);
}

double CounterRng::next_unit() {
    // 53-bit mantissa, shifted into (0, 1]
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
}

std::uint64_t derive_realization_seed(std::uint64_t master_seed,
                                      std::uint64_t realization_index) {
    // odd stride keeps the pre-mix sequence injective in the index
    return mix64(master_seed + (realization_index + 1) * kSeedStreamGamma);
}

}  // namespace tchm
