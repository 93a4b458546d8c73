#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fusegain {

// Deterministic random source. mt19937_64 output is fixed by the standard,
// and the uniform/gaussian transforms below avoid the library distribution
// classes (whose algorithms are implementation-defined), so the same seed
// yields the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), eng_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return eng_(); }

  // uniform on [0, 1), 53-bit resolution
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // standard normal via Box-Muller; two uniforms per sample, u1 kept in (0,1]
  double gaussian() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

  // Independent substream; splitmix64 mixing keeps children decorrelated
  // even for adjacent stream ids.
  Rng child(std::uint64_t stream) const {
    std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
};

}  // namespace fusegain
