#include "sbb/bit_string.hpp"

#include "sbb/errors.hpp"

#include <algorithm>

namespace sbb {

BitString::BitString(std::size_t length, bool fill) : bits_(length, fill ? 1 : 0) {}

BitString BitString::from_string(std::string_view text)
{
  BitString out;
  out.bits_.reserve(text.size());
  for (char ch : text)
  {
    if (ch != '0' && ch != '1')
    {
      throw UsageError("bit string may only contain '0' and '1': " + std::string(text));
    }
    out.bits_.push_back(ch == '1' ? 1 : 0);
  }
  return out;
}

BitString BitString::from_uint(std::uint64_t value, std::size_t width)
{
  BitString out;
  out.append_uint(value, width);
  return out;
}

bool BitString::all_zero() const noexcept
{
  return std::all_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b == 0; });
}

void BitString::append(BitString const &other)
{
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

void BitString::append_uint(std::uint64_t value, std::size_t width)
{
  if (width > 64)
  {
    throw UsageError("append_uint: width exceeds 64 bits");
  }
  for (std::size_t i = width; i-- > 0;)
  {
    bits_.push_back(static_cast<std::uint8_t>((value >> i) & 1U));
  }
}

std::uint64_t BitString::read_uint(std::size_t offset, std::size_t width) const
{
  if (width > 64 || offset + width > bits_.size())
  {
    throw UsageError("read_uint: range out of bounds");
  }
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < width; ++i)
  {
    value = (value << 1U) | bits_[offset + i];
  }
  return value;
}

BitString BitString::slice(std::size_t offset, std::size_t length) const
{
  if (offset + length > bits_.size())
  {
    throw UsageError("slice: range out of bounds");
  }
  BitString out;
  out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(offset),
                   bits_.begin() + static_cast<std::ptrdiff_t>(offset + length));
  return out;
}

std::string BitString::to_string() const
{
  std::string out;
  out.reserve(bits_.size());
  for (auto b : bits_)
  {
    out.push_back(b != 0 ? '1' : '0');
  }
  return out;
}

}  // namespace sbb
