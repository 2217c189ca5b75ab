#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "msrsim/lsp/messages.hpp"
#include "msrsim/msrouter/ms_router.hpp"
#include "msrsim/net/topology.hpp"

namespace msrsim::fwd {

inline constexpr int kDefaultTtl = 64;

struct Route {
  net::IpPrefix prefix;
  net::IpAddress next_hop;
  net::InterfaceId egress;
  Metric metric = 0;
  std::uint8_t priority = 0;  // higher wins among equal-length prefixes

  friend auto operator<=>(const Route&, const Route&) = default;
};

using ForwardingTable = std::vector<Route>;

ForwardingTable from_routing_entries(std::span<const lsp::RoutingEntry> entries);
ForwardingTable from_rules(std::span<const msrouter::ForwardingRule> rules);
/// A host forwards everything to the far end of its single link.
ForwardingTable host_table(const net::Topology& topology, net::NodeId host);

struct Deliver {
  bool operator==(const Deliver&) const = default;
};
struct Forward {
  net::IpAddress next_hop;
  net::InterfaceId egress;
  bool operator==(const Forward&) const = default;
};
struct NoRoute {
  bool operator==(const NoRoute&) const = default;
};
using LookupResult = std::variant<Deliver, Forward, NoRoute>;

/// Deliver for the node's own addresses; otherwise longest-prefix match over
/// the table plus an implicit /32 toward the far end of every linked
/// interface. Ties: longer prefix, higher priority, lower metric, lower next hop.
LookupResult lookup(const net::Topology& topology, net::NodeId node, const ForwardingTable& table,
                    net::IpAddress dst);

/// Read snapshot of every node's forwarding state.
struct DataPlane {
  net::Topology topology;
  std::map<net::NodeId, ForwardingTable> tables;

  const ForwardingTable& table(net::NodeId node) const;
};

struct Packet {
  net::IpAddress src;
  net::IpAddress dst;
  int ttl = kDefaultTtl;
  std::string tag;
};

struct Hop {
  net::NodeId node;
  std::optional<net::InterfaceId> ingress;
  std::optional<net::InterfaceId> egress;

  bool operator==(const Hop&) const = default;
};

enum class TraceOutcome { Delivered, NoRoute, TtlExceeded, LinkDown };
std::string_view to_string(TraceOutcome outcome);

struct TraceRecord {
  Packet packet;
  std::vector<Hop> hops;
  Metric total_metric = 0;
  TraceOutcome outcome = TraceOutcome::Delivered;
  std::optional<net::NodeId> failed_at;    // NoRoute / TtlExceeded
  std::optional<net::LinkId> failed_link;  // LinkDown

  /// Node sequence, for path comparisons.
  std::vector<net::NodeId> path() const;
};

/// Hop-by-hop propagation from src_node until delivery or a drop.
TraceRecord forward_packet(const DataPlane& plane, net::NodeId src_node, Packet packet);

/// One line per hop followed by a `trace-v1 result=...` summary line.
std::string trace_report(const net::Topology& topology, const TraceRecord& record);

}  // namespace msrsim::fwd
