#pragma once

#include <cstdint>

namespace sbb::gf {

/// An element of GF(2^width). The width travels with the value so that mixing
/// elements of differently sized fields is caught at the arithmetic call.
struct FieldElement
{
  std::uint32_t value = 0;
  unsigned      width = 0;

  friend bool operator==(FieldElement const &, FieldElement const &) = default;
};

/// Largest supported symbol width; desk-scale simulations never need more.
constexpr unsigned kMaxWidth = 16;

/// Reduction polynomial used when the caller gives only c. Bit i is the
/// coefficient of x^i, so x^3+x+1 is 0b1011.
std::uint32_t default_polynomial(unsigned c);

/// Trial division by every polynomial of degree 1..deg/2.
bool is_irreducible(std::uint32_t polynomial);

int degree(std::uint32_t polynomial) noexcept;

class FieldSpec
{
public:
  /// Throws ConfigError unless polynomial is irreducible of degree exactly c.
  FieldSpec(unsigned c, std::uint32_t reduction_polynomial);

  static FieldSpec with_default_polynomial(unsigned c);

  unsigned      c() const noexcept { return c_; }
  std::uint32_t polynomial() const noexcept { return polynomial_; }
  std::uint32_t size() const noexcept { return 1U << c_; }

  friend bool operator==(FieldSpec const &, FieldSpec const &) = default;

private:
  unsigned      c_;
  std::uint32_t polynomial_;
};

/// Arithmetic in GF(2^c). Multiplication is shift-and-xor; no tables.
class GaloisField
{
public:
  explicit GaloisField(FieldSpec spec);

  FieldSpec const &spec() const noexcept { return spec_; }
  unsigned         width() const noexcept { return spec_.c(); }

  /// Throws ConfigError when value does not fit in c bits.
  FieldElement element(std::uint32_t value) const;
  FieldElement zero() const noexcept { return {0, spec_.c()}; }
  FieldElement one() const noexcept { return {1, spec_.c()}; }

  FieldElement add(FieldElement a, FieldElement b) const;
  FieldElement sub(FieldElement a, FieldElement b) const { return add(a, b); }
  FieldElement mul(FieldElement a, FieldElement b) const;
  /// Throws std::domain_error for a == 0.
  FieldElement inv(FieldElement a) const;
  FieldElement div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }
  FieldElement pow(FieldElement a, std::uint64_t exponent) const;

  /// Smallest element of multiplicative order 2^c - 1.
  FieldElement generator() const noexcept { return generator_; }
  std::uint32_t multiplicative_order(FieldElement a) const;

private:
  void check(FieldElement a) const;

  FieldSpec    spec_;
  FieldElement generator_{};
};

}  // namespace sbb::gf
