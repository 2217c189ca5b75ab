#include "msrsim/net/ip.hpp"

#include <charconv>

#include "msrsim/errors.hpp"

namespace msrsim::net {
namespace {

std::optional<int> parse_int(std::string_view text, int lo, int hi) {
  if (text.empty() || text.size() > 3) return std::nullopt;
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || v < lo || v > hi) return std::nullopt;
  return v;
}

}  // namespace

std::optional<IpAddress> IpAddress::parse(std::string_view text) {
  std::uint32_t value = 0;
  for (int i = 0; i < 4; ++i) {
    auto dot = text.find('.');
    if ((i < 3) != (dot != std::string_view::npos)) return std::nullopt;
    auto part = parse_int(text.substr(0, dot), 0, 255);
    if (!part) return std::nullopt;
    value = (value << 8) | static_cast<std::uint32_t>(*part);
    text = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  }
  return IpAddress{value};
}

std::string IpAddress::to_string() const {
  return std::to_string(value_ >> 24) + '.' + std::to_string((value_ >> 16) & 0xFF) + '.' +
         std::to_string((value_ >> 8) & 0xFF) + '.' + std::to_string(value_ & 0xFF);
}

IpPrefix::IpPrefix(IpAddress base, int length) {
  if (length < 0 || length > 32) {
    throw Error(ErrorCode::InvariantViolation, "prefix length " + std::to_string(length));
  }
  if ((base.value() & ~prefix_mask(length)) != 0) {
    throw Error(ErrorCode::InvariantViolation,
                "host bits set in prefix " + base.to_string() + "/" + std::to_string(length));
  }
  base_ = base;
  length_ = static_cast<std::uint8_t>(length);
}

IpPrefix IpPrefix::covering(IpAddress addr, int length) {
  return IpPrefix(IpAddress{addr.value() & prefix_mask(length)}, length);
}

std::optional<IpPrefix> IpPrefix::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  auto addr = IpAddress::parse(text.substr(0, slash));
  auto len = parse_int(text.substr(slash + 1), 0, 32);
  if (!addr || !len) return std::nullopt;
  if ((addr->value() & ~prefix_mask(*len)) != 0) return std::nullopt;
  return IpPrefix(*addr, *len);
}

std::pair<IpAddress, IpAddress> IpPrefix::host_range() const {
  std::uint32_t first = base_.value();
  std::uint32_t last = first | ~mask();
  if (length_ < 31) {
    ++first;
    --last;
  }
  return {IpAddress{first}, IpAddress{last}};
}

std::string IpPrefix::to_string() const { return base_.to_string() + '/' + std::to_string(length_); }

std::optional<std::pair<IpAddress, IpPrefix>> parse_interface_address(std::string_view text,
                                                                      int default_length) {
  int length = default_length;
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    auto len = parse_int(text.substr(slash + 1), 0, 32);
    if (!len) return std::nullopt;
    length = *len;
    text = text.substr(0, slash);
  }
  auto addr = IpAddress::parse(text);
  if (!addr) return std::nullopt;
  return std::pair{*addr, IpPrefix::covering(*addr, length)};
}

std::ostream& operator<<(std::ostream& os, IpAddress addr) { return os << addr.to_string(); }
std::ostream& operator<<(std::ostream& os, const IpPrefix& prefix) { return os << prefix.to_string(); }

}  // namespace msrsim::net
