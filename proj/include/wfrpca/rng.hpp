#pragma once

#include <cstdint>

#include "wfrpca/dense_matrix.hpp"

namespace wfrpca {

struct RngSeed {
    std::uint64_t value = 0;
};

// Derives a stream-specific seed (splitmix64 finalizer over seed and stream
// index). Used to hand independent trials their own generators so parallel
// and serial execution produce identical results.
RngSeed derive_seed(RngSeed base, std::uint64_t stream);

// xoshiro256++ seeded through splitmix64. Gaussians via Box-Muller. The whole
// generator is self-contained so sequences reproduce bit-for-bit.
class Rng {
public:
    explicit Rng(RngSeed seed);

    std::uint64_t next_u64();
    // Uniform on [0, 1) with 53 random bits.
    double uniform01();
    // Uniform on [lo, hi).
    double uniform(double lo, double hi);
    // log-uniform on [lo, hi), lo > 0.
    double log_uniform(double lo, double hi);
    double normal();
    // Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n);

private:
    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

DenseMatrix gaussian_matrix(int rows, int cols, Rng& rng);

}  // namespace wfrpca
