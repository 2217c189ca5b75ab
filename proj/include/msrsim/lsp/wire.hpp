#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "msrsim/lsp/messages.hpp"

namespace msrsim::lsp {

// Big-endian framing. First byte is the packet type: 1 = hello, 4 = update.
inline constexpr std::uint8_t kHelloType = 1;
inline constexpr std::uint8_t kUpdateType = 4;

Bytes encode(const RoutingMessage& msg);
/// nullopt for truncated or malformed input.
std::optional<RoutingMessage> decode(std::span<const std::uint8_t> bytes);

inline bool is_hello(std::span<const std::uint8_t> bytes) {
  return !bytes.empty() && bytes[0] == kHelloType;
}

}  // namespace msrsim::lsp
