#pragma once

#include "sbb/bit_string.hpp"
#include "sbb/galois_field.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace sbb {

using gf::FieldElement;
using gf::GaloisField;

/// n - 2t data symbols; the coefficients of the data polynomial, lowest degree first.
struct DataBlock
{
  std::vector<FieldElement> symbols;

  friend bool operator==(DataBlock const &, DataBlock const &) = default;
};

/// n coded symbols: the data polynomial evaluated at the n evaluation points.
struct Codeword
{
  std::vector<FieldElement> symbols;

  /// 1-based position, matching node ids.
  FieldElement at(std::size_t position) const { return symbols.at(position - 1); }

  friend bool operator==(Codeword const &, Codeword const &) = default;
};

/// What one node holds for each codeword position; nullopt is the null symbol.
struct PartialView
{
  std::vector<std::optional<FieldElement>> entries;

  std::optional<FieldElement> const &at(std::size_t position) const { return entries.at(position - 1); }
  std::optional<FieldElement>       &at(std::size_t position) { return entries.at(position - 1); }

  std::size_t              non_null_count() const;
  std::vector<std::size_t> non_null_positions() const;

  friend bool operator==(PartialView const &, PartialView const &) = default;
};

/// The (n, n-2t) Reed-Solomon code used for misbehaviour detection.
/// Position j (1-based) is evaluated at alpha^(j-1), alpha the field generator.
class ReedSolomonCode
{
public:
  /// Throws ConfigError unless n - 2t >= 1 and n <= 2^c - 1.
  ReedSolomonCode(GaloisField field, std::size_t n, std::size_t t);

  GaloisField const &field() const noexcept { return field_; }
  std::size_t        n() const noexcept { return n_; }
  std::size_t        t() const noexcept { return t_; }
  /// Number of data symbols, n - 2t.
  std::size_t k() const noexcept { return n_ - 2 * t_; }
  /// Bits per data block, c(n - 2t).
  std::size_t block_bits() const noexcept { return k() * field_.width(); }
  std::size_t symbol_bits() const noexcept { return field_.width(); }

  FieldElement evaluation_point(std::size_t position) const { return points_.at(position - 1); }

  Codeword encode(DataBlock const &data) const;

  /// Solves for the data block from exactly k positions (1-based) of the view.
  /// Throws UsageError on a wrong-sized subset, a repeated or out-of-range
  /// position, or a NULL entry.
  DataBlock reconstruct(PartialView const &view, std::span<std::size_t const> subset) const;

  /// Decode from the first k non-NULL entries, re-encode, and compare against
  /// every non-NULL entry. Returns the data block iff one codeword fits them all.
  /// Throws InvariantViolation when the view has fewer than k non-NULL entries.
  std::optional<DataBlock> check_consistency(PartialView const &view) const;

  DataBlock default_block() const;

  BitString    to_bits(DataBlock const &block) const;
  /// Reads exactly block_bits() bits; returns nullopt for any other length.
  std::optional<DataBlock> block_from_bits(BitString const &bits) const;
  BitString                symbol_to_bits(FieldElement symbol) const;
  std::optional<FieldElement> symbol_from_bits(BitString const &bits) const;

  PartialView full_view(Codeword const &word) const;

private:
  void check_block(DataBlock const &data) const;

  GaloisField               field_;
  std::size_t               n_;
  std::size_t               t_;
  std::vector<FieldElement> points_;
};

}  // namespace sbb
