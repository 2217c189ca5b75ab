#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

namespace msrsim::net {

class IpAddress {
 public:
  constexpr IpAddress() = default;
  constexpr explicit IpAddress(std::uint32_t value) : value_(value) {}
  constexpr IpAddress(std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d)
      : value_((std::uint32_t{a} << 24) | (std::uint32_t{b} << 16) | (std::uint32_t{c} << 8) | d) {}

  /// Strict dotted quad; returns nullopt on anything else.
  static std::optional<IpAddress> parse(std::string_view text);

  constexpr std::uint32_t value() const { return value_; }
  std::string to_string() const;

  friend constexpr auto operator<=>(IpAddress, IpAddress) = default;

 private:
  std::uint32_t value_ = 0;
};

constexpr std::uint32_t prefix_mask(int length) {
  return length <= 0 ? 0u : (length >= 32 ? 0xFFFFFFFFu : ~((1u << (32 - length)) - 1u));
}

/// An IPv4 prefix whose base address has every host bit cleared.
class IpPrefix {
 public:
  constexpr IpPrefix() = default;
  /// Throws Error(InvariantViolation) if length is outside 0..32 or host bits are set.
  IpPrefix(IpAddress base, int length);

  /// The prefix of the given length that covers addr.
  static IpPrefix covering(IpAddress addr, int length);
  /// "a.b.c.d/len" with a clean base; nullopt otherwise.
  static std::optional<IpPrefix> parse(std::string_view text);

  constexpr IpAddress base() const { return base_; }
  constexpr int length() const { return length_; }
  constexpr std::uint32_t mask() const { return prefix_mask(length_); }

  constexpr bool contains(IpAddress addr) const {
    return (addr.value() & mask()) == base_.value();
  }

  /// First and last usable host addresses. /31 and /32 have no network or
  /// broadcast address to exclude.
  std::pair<IpAddress, IpAddress> host_range() const;

  std::string to_string() const;

  friend constexpr auto operator<=>(const IpPrefix&, const IpPrefix&) = default;

 private:
  IpAddress base_;
  std::uint8_t length_ = 0;
};

constexpr bool contains(const IpPrefix& prefix, IpAddress addr) { return prefix.contains(addr); }

/// Parses "a.b.c.d[/len]" as an interface address plus its covering subnet;
/// the length defaults to default_length when omitted.
std::optional<std::pair<IpAddress, IpPrefix>> parse_interface_address(std::string_view text,
                                                                      int default_length = 24);

std::ostream& operator<<(std::ostream& os, IpAddress addr);
std::ostream& operator<<(std::ostream& os, const IpPrefix& prefix);

}  // namespace msrsim::net
