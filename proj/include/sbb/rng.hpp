#pragma once

#include "sbb/bit_string.hpp"

#include <cstdint>
#include <random>

namespace sbb {

/// splitmix64 finalizer; derives independent sub-seeds from one base seed.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31U);
}

/// Deterministic random stream. Uses only raw mt19937_64 output (which the standard
/// pins down exactly) so runs are bit-reproducible across standard libraries.
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : engine_{seed} {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound)
  {
    std::uint64_t const limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t       v     = engine_();
    while (v >= limit)
    {
      v = engine_();
    }
    return v % bound;
  }

  bool chance(std::uint64_t numerator, std::uint64_t denominator) { return below(denominator) < numerator; }

  BitString bits(std::size_t length)
  {
    BitString out(length);
    for (std::size_t i = 0; i < length; ++i)
    {
      out.set(i, (engine_() & 1U) != 0);
    }
    return out;
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace sbb
