#pragma once

#include <array>
#include <cstdint>

namespace strat {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Stateless: output is a pure function of counter and key.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Uniform double in the open interval (0, 1) from the top 52 bits of a 64-bit word.
double uniform_open(std::uint64_t bits);

/// Standard normal quantile.
double normal_quantile(double u);

/// Independent N(0, 1) variates addressed by (stream, component, index) under
/// a 64-bit seed. Every address maps to one Philox block, so draws do not
/// depend on the order in which they are requested.
class KeyedNormal {
 public:
  explicit KeyedNormal(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t bits(std::uint64_t stream, std::uint32_t component, std::uint32_t index) const;
  double uniform(std::uint64_t stream, std::uint32_t component, std::uint32_t index) const {
    return uniform_open(bits(stream, component, index));
  }
  double operator()(std::uint64_t stream, std::uint32_t component, std::uint32_t index) const {
    return normal_quantile(uniform(stream, component, index));
  }

 private:
  std::uint64_t seed_;
};

/// Stream id for (path, step) pairs used by the path simulators.
inline std::uint64_t path_step_stream(std::uint32_t path, std::uint32_t step) {
  return (static_cast<std::uint64_t>(path) << 32) | step;
}

}  // namespace strat
