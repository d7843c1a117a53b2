#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sbb {

/// Fixed-length sequence of bits, most significant bit first when packing integers.
/// Payload sizes on the channel are measured in bits of this type.
class BitString
{
public:
  BitString() = default;
  explicit BitString(std::size_t length, bool fill = false);

  /// Parses "0101..." text. Throws UsageError on any other character.
  static BitString from_string(std::string_view text);
  static BitString from_uint(std::uint64_t value, std::size_t width);

  std::size_t size() const noexcept { return bits_.size(); }
  bool        empty() const noexcept { return bits_.empty(); }
  bool        operator[](std::size_t i) const { return bits_[i] != 0; }
  void        set(std::size_t i, bool bit) { bits_.at(i) = bit ? 1 : 0; }
  void        flip(std::size_t i) { bits_.at(i) ^= 1; }
  bool        all_zero() const noexcept;

  void append(BitString const &other);
  void append_bit(bool bit) { bits_.push_back(bit ? 1 : 0); }
  void append_uint(std::uint64_t value, std::size_t width);

  std::uint64_t read_uint(std::size_t offset, std::size_t width) const;
  BitString     slice(std::size_t offset, std::size_t length) const;

  std::string to_string() const;

  friend bool operator==(BitString const &, BitString const &)  = default;
  friend auto operator<=>(BitString const &, BitString const &) = default;

private:
  std::vector<std::uint8_t> bits_;
};

}  // namespace sbb
