#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "msrsim/net/ip.hpp"
#include "msrsim/types.hpp"

namespace msrsim::mobile {
class MobileSystem;
}

namespace msrsim::net {

enum class NodeKind { Host, ExternalRouter, UeRouter, N6Router, Ue, Upf, Smf };

std::string_view to_string(NodeKind kind);
/// Scenario keyword ("host", "router", "ue-router", "n6-router", "ue", "upf", "smf").
std::optional<NodeKind> parse_node_kind(std::string_view keyword);
std::string_view keyword(NodeKind kind);

/// Nodes that run their own link-state instance. UPFs participate through
/// their MS-Router, which the mobile system owns.
constexpr bool is_external_router(NodeKind kind) {
  return kind == NodeKind::ExternalRouter || kind == NodeKind::UeRouter ||
         kind == NodeKind::N6Router || kind == NodeKind::Ue;
}

struct NodeId {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

struct InterfaceId {
  NodeId node;
  std::uint32_t ordinal = 0;
  friend constexpr auto operator<=>(const InterfaceId&, const InterfaceId&) = default;
};

struct LinkId {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(LinkId, LinkId) = default;
};

enum class AdminState { Up, Down };
enum class LinkState { Up, Down };

struct Interface {
  InterfaceId id;
  IpAddress address;
  IpPrefix subnet;
  std::string name;
  AdminState admin_state = AdminState::Up;

  bool operator==(const Interface&) const = default;
};

struct Node {
  NodeId id;
  NodeKind kind = NodeKind::Host;
  std::string name;
  std::vector<Interface> interfaces;  // sorted by ordinal

  const Interface* find_interface(std::uint32_t ordinal) const;
  bool operator==(const Node&) const = default;
};

struct Link {
  LinkId id;
  InterfaceId a;
  InterfaceId b;
  Metric metric_ab = 1;
  Metric metric_ba = 1;
  LinkState state = LinkState::Up;

  bool touches(const InterfaceId& iface) const { return a == iface || b == iface; }
  InterfaceId peer_of(const InterfaceId& iface) const { return iface == a ? b : a; }
  /// Cost of leaving through `from` toward the other end.
  Metric metric_from(const InterfaceId& from) const { return from == a ? metric_ab : metric_ba; }
  bool up() const { return state == LinkState::Up; }
  bool operator==(const Link&) const = default;
};

/// Permission token for creating UPF interfaces; only the mobile system (N6
/// attach, PDU sessions) and the state-file codec can mint one.
class UpfInterfaceKey {
  friend class mobile::MobileSystem;
  friend struct TopologyCodec;
  UpfInterfaceKey() = default;
};

/// Nodes, interfaces and point-to-point links of one scenario. A value type:
/// copies are independent snapshots.
class Topology {
 public:
  /// Throws DuplicateName.
  NodeId add_node(NodeKind kind, std::string name);

  /// Throws InvariantViolation (UPF node, address outside subnet, duplicate
  /// ordinal, host already has an interface) or AddressInUse.
  InterfaceId add_interface(NodeId node, std::uint32_t ordinal, IpAddress address, IpPrefix subnet,
                            std::string name = {});
  InterfaceId add_upf_interface(UpfInterfaceKey key, NodeId upf, std::uint32_t ordinal,
                                IpAddress address, IpPrefix subnet, std::string name);
  /// Removes the interface and the link attached to it, if any.
  void remove_interface(const InterfaceId& iface);
  void set_admin_state(const InterfaceId& iface, AdminState state);

  /// Throws UnknownReference, SubnetMismatch, MetricOutOfRange, or
  /// InvariantViolation when either interface already carries a link.
  LinkId add_link(const InterfaceId& a, const InterfaceId& b, Metric metric_ab, Metric metric_ba);
  void remove_link(LinkId id);
  void set_link_state(LinkId id, LinkState state);
  /// metric_ab is the cost leaving link.a; throws MetricOutOfRange.
  void set_link_metrics(LinkId id, Metric metric_ab, Metric metric_ba);

  std::uint32_t next_free_ordinal(NodeId node) const;

  std::span<const Node> nodes() const { return nodes_; }
  const Node& node(NodeId id) const;
  std::optional<NodeId> find_node(std::string_view name) const;
  const Interface& interface(const InterfaceId& id) const;
  const Interface* find_interface(const InterfaceId& id) const;
  const Interface* find_interface_by_name(NodeId node, std::string_view name) const;
  std::optional<InterfaceId> find_interface_by_address(IpAddress addr) const;
  const std::map<LinkId, Link>& links() const { return links_; }
  const Link& link(LinkId id) const;
  std::optional<LinkId> link_on(const InterfaceId& iface) const;
  /// The interface at the other end of iface's link.
  std::optional<InterfaceId> peer(const InterfaceId& iface) const;

  /// "<node>.<interface name>", for logs and reports.
  std::string describe(const InterfaceId& iface) const;

  bool operator==(const Topology& other) const {
    return nodes_ == other.nodes_ && links_ == other.links_;
  }

 private:
  InterfaceId insert_interface(NodeId node, std::uint32_t ordinal, IpAddress address,
                               IpPrefix subnet, std::string name);
  Node& mutable_node(NodeId id);
  Interface& mutable_interface(const InterfaceId& id);

  std::vector<Node> nodes_;
  std::map<std::string, NodeId, std::less<>> by_name_;
  std::map<IpAddress, InterfaceId> by_address_;
  std::map<LinkId, Link> links_;
  std::map<InterfaceId, LinkId> link_by_iface_;
  std::uint32_t next_link_ = 0;

  friend struct TopologyCodec;
};

std::string default_interface_name(std::uint32_t ordinal);

}  // namespace msrsim::net
