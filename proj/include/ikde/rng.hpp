#pragma once

#include <cstdint>
#include <random>

#include "ikde/numeric.hpp"

namespace ikde {

//! Deterministic random source. mt19937_64 output is fixed by the standard
//! and the uniform/normal mappings below avoid std::*_distribution (whose
//! algorithms are implementation-defined), so streams are identical across
//! platforms and toolchains for a given seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    //! Uniform on the open interval (0,1): 52-bit lattice, half-step offset.
    double uniform() {
        return (static_cast<double>(eng_() >> 12) + 0.5) * 0x1p-52;
    }

    //! Standard normal via the inverse distribution function.
    double normal() { return inverse_normal_cdf(uniform()); }

  private:
    std::mt19937_64 eng_;
};

} // namespace ikde
