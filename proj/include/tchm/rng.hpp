#ifndef TCHM_RNG_HPP
#define TCHM_RNG_HPP

#include <cstdint>

namespace tchm {

// Counter-based generator: output i is a bijective mix of (key + i*gamma),
// the SplitMix64 scheme. Stateless apart from the counter, so streams can
// be split and replayed deterministically.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    std::uint64_t next_u64();

    // uniform in (0, 1]
    double next_unit();

    // standard normal via the exact Box-Muller transform
    double next_gaussian();

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// Seed for realization `index` of a sweep driven by `master_seed`.
// Injective in the index (bijective mix of an odd-stride arithmetic
// sequence), so parallel ensembles never collide.
std::uint64_t derive_realization_seed(std::uint64_t master_seed,
                                      std::uint64_t realization_index);

}  // namespace tchm

#endif
