#include "sbb/bounds.hpp"

#include "sbb/errors.hpp"

namespace sbb::bounds {

namespace {

void require(bool ok, char const *what)
{
  if (!ok)
  {
    throw ConfigError(what);
  }
}

}  // namespace

Rational detectable_cost_bits(std::int64_t n, std::int64_t t, std::int64_t D)
{
  require(t >= 0 && n >= 3 * t + 1, "need n >= 3t + 1");
  require(D > 0 && D % (n - 2 * t) == 0, "D must be a positive multiple of n - 2t");
  return Rational{D} + Rational{(n - 1) * D, n - 2 * t};
}

Rational total_bb_cost_bits(std::int64_t n, std::int64_t t, std::int64_t L)
{
  require(t >= 0 && n >= 3 * t + 1, "need n >= 3t + 1");
  require(L > 0, "L must be positive");
  return Rational{L} * cost_ratio(n, t);
}

Rational cost_ratio(std::int64_t n, std::int64_t t)
{
  require(t >= 0 && n >= 3 * t + 1, "need n >= 3t + 1");
  return Rational{2 * n - 2 * t - 1, n - 2 * t};
}

Rational static_db_lower_bound_bits(std::int64_t n, std::int64_t f, std::int64_t L)
{
  require(n >= 1 && f >= 0 && f < n, "need 0 <= f < n");
  require(L >= 0, "L must be non-negative");
  return Rational{L} + Rational{(n - 1) * L, n - f};
}

std::int64_t message_lower_bound(std::int64_t t)
{
  require(t >= 0, "t must be non-negative");
  return t + 1;
}

Rational modular_bound(ModularBoundParams const &params, std::int64_t t)
{
  require(params.m_star != nullptr, "m_star is missing");
  require(params.B >= 2 && params.B <= t + 1, "need 2 <= B <= t + 1");
  require(params.i >= 0, "need i >= 0");
  std::int64_t power = 1;
  for (std::int64_t k = 0; k < params.i; ++k)
  {
    power *= params.B;
  }
  require(params.i == 0 || power <= t, "need i <= log_B t");
  require(params.alpha > 0, "alpha must be positive");
  return Rational{power} * params.m_star(Rational{3 * t, power} + 1) + params.alpha * Rational{params.B * t * params.i};
}

std::string to_string(Rational const &r)
{
  std::string out = std::to_string(r.numerator());
  if (r.denominator() != 1)
  {
    out += "/" + std::to_string(r.denominator());
  }
  return out;
}

}  // namespace sbb::bounds
