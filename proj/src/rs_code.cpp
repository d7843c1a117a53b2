#include "sbb/rs_code.hpp"

#include "sbb/errors.hpp"

#include <algorithm>
#include <string>

namespace sbb {

std::size_t PartialView::non_null_count() const
{
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](auto const &e) { return e.has_value(); }));
}

std::vector<std::size_t> PartialView::non_null_positions() const
{
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < entries.size(); ++i)
  {
    if (entries[i])
    {
      out.push_back(i + 1);
    }
  }
  return out;
}

ReedSolomonCode::ReedSolomonCode(GaloisField field, std::size_t n, std::size_t t)
  : field_{std::move(field)}, n_{n}, t_{t}
{
  if (n <= 2 * t)
  {
    throw ConfigError("code needs n - 2t >= 1, got n=" + std::to_string(n) + " t=" + std::to_string(t));
  }
  if (n > field_.spec().size() - 1)
  {
    throw ConfigError("n=" + std::to_string(n) + " exceeds 2^c - 1 for c=" + std::to_string(field_.width()));
  }
  points_.reserve(n);
  FieldElement point = field_.one();
  for (std::size_t j = 0; j < n; ++j)
  {
    points_.push_back(point);
    point = field_.mul(point, field_.generator());
  }
}

void ReedSolomonCode::check_block(DataBlock const &data) const
{
  if (data.symbols.size() != k())
  {
    throw ConfigError("data block has " + std::to_string(data.symbols.size()) + " symbols, code expects " +
                      std::to_string(k()));
  }
}

Codeword ReedSolomonCode::encode(DataBlock const &data) const
{
  check_block(data);
  Codeword word;
  word.symbols.reserve(n_);
  for (auto const &point : points_)
  {
    // Horner evaluation, highest coefficient first.
    FieldElement acc = field_.zero();
    for (auto it = data.symbols.rbegin(); it != data.symbols.rend(); ++it)
    {
      acc = field_.add(field_.mul(acc, point), *it);
    }
    word.symbols.push_back(acc);
  }
  return word;
}

DataBlock ReedSolomonCode::reconstruct(PartialView const &view, std::span<std::size_t const> subset) const
{
  std::size_t const rows = k();
  if (view.entries.size() != n_)
  {
    throw UsageError("view has " + std::to_string(view.entries.size()) + " entries, expected " + std::to_string(n_));
  }
  if (subset.size() != rows)
  {
    throw UsageError("reconstruct needs exactly " + std::to_string(rows) + " positions, got " +
                     std::to_string(subset.size()));
  }
  std::vector<std::size_t> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
  {
    throw UsageError("reconstruct subset repeats a position");
  }
  for (auto p : subset)
  {
    if (p < 1 || p > n_)
    {
      throw UsageError("position " + std::to_string(p) + " out of range");
    }
    if (!view.at(p))
    {
      throw UsageError("position " + std::to_string(p) + " is NULL");
    }
  }

  // Vandermonde system, augmented with the observed symbols, solved by
  // Gauss-Jordan elimination. Distinct points make it non-singular.
  std::vector<std::vector<FieldElement>> m(rows, std::vector<FieldElement>(rows + 1, field_.zero()));
  for (std::size_t r = 0; r < rows; ++r)
  {
    FieldElement const x = evaluation_point(subset[r]);
    FieldElement       power = field_.one();
    for (std::size_t col = 0; col < rows; ++col)
    {
      m[r][col] = power;
      power     = field_.mul(power, x);
    }
    m[r][rows] = *view.at(subset[r]);
  }
  for (std::size_t col = 0; col < rows; ++col)
  {
    std::size_t pivot = col;
    while (m[pivot][col].value == 0)
    {
      ++pivot;
    }
    std::swap(m[pivot], m[col]);
    FieldElement const scale = field_.inv(m[col][col]);
    for (auto &cell : m[col])
    {
      cell = field_.mul(cell, scale);
    }
    for (std::size_t r = 0; r < rows; ++r)
    {
      if (r == col || m[r][col].value == 0)
      {
        continue;
      }
      FieldElement const factor = m[r][col];
      for (std::size_t c = col; c <= rows; ++c)
      {
        m[r][c] = field_.sub(m[r][c], field_.mul(factor, m[col][c]));
      }
    }
  }
  DataBlock out;
  out.symbols.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r)
  {
    out.symbols.push_back(m[r][rows]);
  }
  return out;
}

std::optional<DataBlock> ReedSolomonCode::check_consistency(PartialView const &view) const
{
  auto const positions = view.non_null_positions();
  if (positions.size() < k())
  {
    throw InvariantViolation("view has " + std::to_string(positions.size()) + " non-NULL symbols, needs at least " +
                             std::to_string(k()));
  }
  DataBlock const candidate = reconstruct(view, std::span(positions).first(k()));
  Codeword const  word      = encode(candidate);
  for (auto p : positions)
  {
    if (*view.at(p) != word.at(p))
    {
      return std::nullopt;
    }
  }
  return candidate;
}

DataBlock ReedSolomonCode::default_block() const
{
  return DataBlock{std::vector<FieldElement>(k(), field_.zero())};
}

BitString ReedSolomonCode::to_bits(DataBlock const &block) const
{
  check_block(block);
  BitString out;
  for (auto const &s : block.symbols)
  {
    out.append_uint(s.value, field_.width());
  }
  return out;
}

std::optional<DataBlock> ReedSolomonCode::block_from_bits(BitString const &bits) const
{
  if (bits.size() != block_bits())
  {
    return std::nullopt;
  }
  DataBlock block;
  block.symbols.reserve(k());
  for (std::size_t i = 0; i < k(); ++i)
  {
    block.symbols.push_back(
        field_.element(static_cast<std::uint32_t>(bits.read_uint(i * field_.width(), field_.width()))));
  }
  return block;
}

BitString ReedSolomonCode::symbol_to_bits(FieldElement symbol) const
{
  return BitString::from_uint(field_.element(symbol.value).value, field_.width());
}

std::optional<FieldElement> ReedSolomonCode::symbol_from_bits(BitString const &bits) const
{
  if (bits.size() != field_.width())
  {
    return std::nullopt;
  }
  return field_.element(static_cast<std::uint32_t>(bits.read_uint(0, field_.width())));
}

PartialView ReedSolomonCode::full_view(Codeword const &word) const
{
  PartialView view;
  view.entries.assign(word.symbols.begin(), word.symbols.end());
  return view;
}

}  // namespace sbb
