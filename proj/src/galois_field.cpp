#include "sbb/galois_field.hpp"

#include "sbb/errors.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace sbb::gf {

namespace {

constexpr std::array<std::uint32_t, kMaxWidth + 1> kDefaultPolynomials = {
    0x0,     0x3,    0x7,    0xB,    0x13,   0x25,   0x43,   0x83,    0x11D,
    0x211,   0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
};

// Remainder of a / b over GF(2).
std::uint32_t poly_mod(std::uint32_t a, std::uint32_t b)
{
  int const db = degree(b);
  for (int da = degree(a); da >= db; da = degree(a))
  {
    a ^= b << static_cast<unsigned>(da - db);
  }
  return a;
}

}  // namespace

int degree(std::uint32_t polynomial) noexcept
{
  int d = -1;
  while (polynomial != 0)
  {
    polynomial >>= 1U;
    ++d;
  }
  return d;
}

std::uint32_t default_polynomial(unsigned c)
{
  if (c == 0 || c > kMaxWidth)
  {
    throw ConfigError("no default reduction polynomial for c=" + std::to_string(c));
  }
  return kDefaultPolynomials[c];
}

bool is_irreducible(std::uint32_t polynomial)
{
  int const d = degree(polynomial);
  if (d < 1)
  {
    return false;
  }
  for (std::uint32_t divisor = 2; degree(divisor) <= d / 2; ++divisor)
  {
    if (poly_mod(polynomial, divisor) == 0)
    {
      return false;
    }
  }
  return true;
}

FieldSpec::FieldSpec(unsigned c, std::uint32_t reduction_polynomial)
  : c_{c}, polynomial_{reduction_polynomial}
{
  if (c == 0 || c > kMaxWidth)
  {
    throw ConfigError("field width c must be in [1, " + std::to_string(kMaxWidth) +
                      "], got " + std::to_string(c));
  }
  if (degree(reduction_polynomial) != static_cast<int>(c))
  {
    throw ConfigError("reduction polynomial degree does not match c=" + std::to_string(c));
  }
  if (!is_irreducible(reduction_polynomial))
  {
    throw ConfigError("reduction polynomial is reducible");
  }
}

FieldSpec FieldSpec::with_default_polynomial(unsigned c)
{
  return FieldSpec{c, default_polynomial(c)};
}

GaloisField::GaloisField(FieldSpec spec) : spec_{spec}
{
  std::uint32_t const group_order = spec_.size() - 1;
  for (std::uint32_t v = 1; v < spec_.size(); ++v)
  {
    FieldElement const candidate{v, spec_.c()};
    if (multiplicative_order(candidate) == group_order)
    {
      generator_ = candidate;
      return;
    }
  }
  // Irreducible polynomials always give a field, and a finite field's
  // multiplicative group is cyclic.
  throw InvariantViolation("no generator found for GF(2^" + std::to_string(spec_.c()) + ")");
}

void GaloisField::check(FieldElement a) const
{
  if (a.width != spec_.c() || a.value >= spec_.size())
  {
    throw ConfigError("field element of width " + std::to_string(a.width) +
                      " used in GF(2^" + std::to_string(spec_.c()) + ")");
  }
}

FieldElement GaloisField::element(std::uint32_t value) const
{
  FieldElement const e{value, spec_.c()};
  check(e);
  return e;
}

FieldElement GaloisField::add(FieldElement a, FieldElement b) const
{
  check(a);
  check(b);
  return {a.value ^ b.value, spec_.c()};
}

FieldElement GaloisField::mul(FieldElement a, FieldElement b) const
{
  check(a);
  check(b);
  std::uint32_t const top     = spec_.size();
  std::uint32_t       x       = a.value;
  std::uint32_t       y       = b.value;
  std::uint32_t       product = 0;
  while (y != 0)
  {
    if ((y & 1U) != 0)
    {
      product ^= x;
    }
    y >>= 1U;
    x <<= 1U;
    if ((x & top) != 0)
    {
      x ^= spec_.polynomial();
    }
  }
  return {product, spec_.c()};
}

FieldElement GaloisField::pow(FieldElement a, std::uint64_t exponent) const
{
  FieldElement result = one();
  FieldElement base   = a;
  while (exponent != 0)
  {
    if ((exponent & 1U) != 0)
    {
      result = mul(result, base);
    }
    base = mul(base, base);
    exponent >>= 1U;
  }
  return result;
}

FieldElement GaloisField::inv(FieldElement a) const
{
  check(a);
  if (a.value == 0)
  {
    throw std::domain_error("inverse of zero in GF(2^" + std::to_string(spec_.c()) + ")");
  }
  // a^(2^c - 2) = a^-1 by Lagrange's theorem on the multiplicative group.
  return pow(a, spec_.size() - 2);
}

std::uint32_t GaloisField::multiplicative_order(FieldElement a) const
{
  check(a);
  if (a.value == 0)
  {
    return 0;
  }
  std::uint32_t order = 1;
  for (FieldElement x = a; x.value != 1; x = mul(x, a))
  {
    ++order;
  }
  return order;
}

}  // namespace sbb::gf
