#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <functional>
#include <string>

namespace sbb::bounds {

using Rational = boost::rational<std::int64_t>;

/// D + (n-1)D/(n-2t): bits of one detectable broadcast. Requires n >= 3t + 1
/// and D a positive multiple of n - 2t.
Rational detectable_cost_bits(std::int64_t n, std::int64_t t, std::int64_t D);

/// L(2n-2t-1)/(n-2t): bits of all detectable broadcasts for an L-bit input.
Rational total_bb_cost_bits(std::int64_t n, std::int64_t t, std::int64_t L);

/// (2n-2t-1)/(n-2t).
Rational cost_ratio(std::int64_t n, std::int64_t t);

/// L + (n-1)L/(n-f): floor for any static detectable broadcast tolerating f faults.
Rational static_db_lower_bound_bits(std::int64_t n, std::int64_t f, std::int64_t L);

/// t + 1.
std::int64_t message_lower_bound(std::int64_t t);

struct ModularBoundParams
{
  std::int64_t                        B = 2;
  std::int64_t                        i = 0;
  Rational                            alpha{1};
  std::function<Rational(Rational)>   m_star;
};

/// B^i M*(3t/B^i + 1) + alpha B t i. Requires 2 <= B <= t + 1 and B^i <= t
/// (for i > 0).
Rational modular_bound(ModularBoundParams const &params, std::int64_t t);

/// "p" or "p/q".
std::string to_string(Rational const &r);

}  // namespace sbb::bounds
