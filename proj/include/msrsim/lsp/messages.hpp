#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "msrsim/net/ip.hpp"
#include "msrsim/net/topology.hpp"
#include "msrsim/types.hpp"

namespace msrsim::lsp {

struct RouterId {
  std::uint32_t value = 0;

  static RouterId from_address(net::IpAddress addr) { return RouterId{addr.value()}; }
  std::string to_string() const { return net::IpAddress{value}.to_string(); }
  friend constexpr auto operator<=>(RouterId, RouterId) = default;
};

inline constexpr std::uint32_t kDeadIntervalFactor = 4;

struct ProtocolTimers {
  SimTime hello_interval_ms = 1000;
  SimTime dead_interval_ms() const { return hello_interval_ms * kDeadIntervalFactor; }
};

struct HelloMsg {
  RouterId sender;
  net::IpAddress sender_addr;
  std::vector<RouterId> seen_neighbors;  // sorted
  std::uint32_t hello_interval_ms = 1000;
  std::uint32_t dead_interval_ms = 4000;

  bool operator==(const HelloMsg&) const = default;
};

/// Point-to-point adjacency as seen by the originating router: the addresses
/// of both ends identify the link when two routers share several.
struct Adjacency {
  RouterId neighbor;
  net::IpAddress local_address;
  net::IpAddress neighbor_address;
  Metric metric = 1;

  friend auto operator<=>(const Adjacency&, const Adjacency&) = default;
};

struct AttachedPrefix {
  net::IpPrefix prefix;
  Metric metric = 0;

  friend auto operator<=>(const AttachedPrefix&, const AttachedPrefix&) = default;
};

using LsaEntry = std::variant<Adjacency, AttachedPrefix>;

struct Lsa {
  RouterId origin;
  std::uint32_t seq = 0;
  std::vector<LsaEntry> entries;  // sorted
  SimTime originated_at_ms = 0;

  bool operator==(const Lsa&) const = default;
};

struct LsUpdate {
  std::vector<Lsa> lsas;
  bool operator==(const LsUpdate&) const = default;
};

using RoutingMessage = std::variant<HelloMsg, LsUpdate>;

/// One row of a routing table.
struct RoutingEntry {
  net::IpPrefix destination;
  net::IpAddress next_hop;
  net::InterfaceId destination_interface;
  Metric metric = 0;

  friend auto operator<=>(const RoutingEntry&, const RoutingEntry&) = default;
};

}  // namespace msrsim::lsp
