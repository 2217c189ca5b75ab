#include "msrsim/net/topology.hpp"

#include <algorithm>

#include "msrsim/errors.hpp"

namespace msrsim::net {

namespace {

struct KindName {
  NodeKind kind;
  std::string_view keyword;
  std::string_view pretty;
};

constexpr KindName kKinds[] = {
    {NodeKind::Host, "host", "Host"},
    {NodeKind::ExternalRouter, "router", "ExternalRouter"},
    {NodeKind::UeRouter, "ue-router", "UeRouter"},
    {NodeKind::N6Router, "n6-router", "N6Router"},
    {NodeKind::Ue, "ue", "Ue"},
    {NodeKind::Upf, "upf", "Upf"},
    {NodeKind::Smf, "smf", "Smf"},
};

}  // namespace

std::string_view to_string(NodeKind kind) {
  for (const auto& k : kKinds)
    if (k.kind == kind) return k.pretty;
  return "?";
}

std::string_view keyword(NodeKind kind) {
  for (const auto& k : kKinds)
    if (k.kind == kind) return k.keyword;
  return "?";
}

std::optional<NodeKind> parse_node_kind(std::string_view word) {
  for (const auto& k : kKinds)
    if (k.keyword == word) return k.kind;
  return std::nullopt;
}

std::string default_interface_name(std::uint32_t ordinal) { return "eth" + std::to_string(ordinal); }

const Interface* Node::find_interface(std::uint32_t ordinal) const {
  auto it = std::find_if(interfaces.begin(), interfaces.end(),
                         [&](const Interface& i) { return i.id.ordinal == ordinal; });
  return it == interfaces.end() ? nullptr : &*it;
}

NodeId Topology::add_node(NodeKind kind, std::string name) {
  if (by_name_.contains(name)) throw Error(ErrorCode::DuplicateName, name);
  NodeId id{static_cast<std::uint32_t>(nodes_.size())};
  by_name_.emplace(name, id);
  nodes_.push_back(Node{id, kind, std::move(name), {}});
  return id;
}

InterfaceId Topology::add_interface(NodeId node, std::uint32_t ordinal, IpAddress address,
                                    IpPrefix subnet, std::string name) {
  if (this->node(node).kind == NodeKind::Upf) {
    throw Error(ErrorCode::InvariantViolation,
                "UPF interfaces are created by the mobile system (" + this->node(node).name + ")");
  }
  return insert_interface(node, ordinal, address, subnet, std::move(name));
}

InterfaceId Topology::add_upf_interface(UpfInterfaceKey, NodeId upf, std::uint32_t ordinal,
                                        IpAddress address, IpPrefix subnet, std::string name) {
  if (node(upf).kind != NodeKind::Upf) {
    throw Error(ErrorCode::InvariantViolation, node(upf).name + " is not a UPF");
  }
  return insert_interface(upf, ordinal, address, subnet, std::move(name));
}

InterfaceId Topology::insert_interface(NodeId node_id, std::uint32_t ordinal, IpAddress address,
                                       IpPrefix subnet, std::string name) {
  Node& n = mutable_node(node_id);
  if (!subnet.contains(address)) {
    throw Error(ErrorCode::InvariantViolation,
                address.to_string() + " is outside " + subnet.to_string());
  }
  if (n.find_interface(ordinal) != nullptr) {
    throw Error(ErrorCode::InvariantViolation,
                n.name + " already has interface ordinal " + std::to_string(ordinal));
  }
  if (n.kind == NodeKind::Host && !n.interfaces.empty()) {
    throw Error(ErrorCode::InvariantViolation, "host " + n.name + " has exactly one interface");
  }
  if (by_address_.contains(address)) throw Error(ErrorCode::AddressInUse, address.to_string());
  if (name.empty()) name = default_interface_name(ordinal);
  InterfaceId id{node_id, ordinal};
  Interface iface{id, address, subnet, std::move(name), AdminState::Up};
  auto pos = std::lower_bound(n.interfaces.begin(), n.interfaces.end(), ordinal,
                              [](const Interface& i, std::uint32_t o) { return i.id.ordinal < o; });
  n.interfaces.insert(pos, std::move(iface));
  by_address_.emplace(address, id);
  return id;
}

void Topology::remove_interface(const InterfaceId& id) {
  const Interface& iface = interface(id);
  if (auto l = link_on(id)) remove_link(*l);
  by_address_.erase(iface.address);
  auto& ifs = mutable_node(id.node).interfaces;
  std::erase_if(ifs, [&](const Interface& i) { return i.id == id; });
}

void Topology::set_admin_state(const InterfaceId& id, AdminState state) {
  mutable_interface(id).admin_state = state;
}

LinkId Topology::add_link(const InterfaceId& a, const InterfaceId& b, Metric metric_ab,
                          Metric metric_ba) {
  const Interface* ia = find_interface(a);
  const Interface* ib = find_interface(b);
  if (ia == nullptr || ib == nullptr) throw Error(ErrorCode::UnknownReference, "link endpoint");
  if (a == b) throw Error(ErrorCode::InvariantViolation, "link from an interface to itself");
  if (ia->subnet != ib->subnet) {
    throw Error(ErrorCode::SubnetMismatch, ia->subnet.to_string() + " vs " + ib->subnet.to_string());
  }
  if (!metric_in_range(metric_ab) || !metric_in_range(metric_ba)) {
    throw Error(ErrorCode::MetricOutOfRange,
                std::to_string(metric_ab) + "/" + std::to_string(metric_ba));
  }
  if (link_by_iface_.contains(a) || link_by_iface_.contains(b)) {
    throw Error(ErrorCode::InvariantViolation, "interface already linked");
  }
  LinkId id{next_link_++};
  links_.emplace(id, Link{id, a, b, metric_ab, metric_ba, LinkState::Up});
  link_by_iface_.emplace(a, id);
  link_by_iface_.emplace(b, id);
  return id;
}

void Topology::remove_link(LinkId id) {
  const Link& l = link(id);
  link_by_iface_.erase(l.a);
  link_by_iface_.erase(l.b);
  links_.erase(id);
}

void Topology::set_link_state(LinkId id, LinkState state) {
  auto it = links_.find(id);
  if (it == links_.end()) throw Error(ErrorCode::UnknownReference, "link " + std::to_string(id.value));
  it->second.state = state;
}

void Topology::set_link_metrics(LinkId id, Metric metric_ab, Metric metric_ba) {
  if (!metric_in_range(metric_ab) || !metric_in_range(metric_ba)) {
    throw Error(ErrorCode::MetricOutOfRange,
                std::to_string(metric_ab) + "/" + std::to_string(metric_ba));
  }
  auto it = links_.find(id);
  if (it == links_.end()) throw Error(ErrorCode::UnknownReference, "link " + std::to_string(id.value));
  it->second.metric_ab = metric_ab;
  it->second.metric_ba = metric_ba;
}

std::uint32_t Topology::next_free_ordinal(NodeId id) const {
  const auto& ifs = node(id).interfaces;
  return ifs.empty() ? 1 : ifs.back().id.ordinal + 1;
}

const Node& Topology::node(NodeId id) const {
  if (id.value >= nodes_.size()) throw Error(ErrorCode::UnknownReference, "node " + std::to_string(id.value));
  return nodes_[id.value];
}

Node& Topology::mutable_node(NodeId id) {
  if (id.value >= nodes_.size()) throw Error(ErrorCode::UnknownReference, "node " + std::to_string(id.value));
  return nodes_[id.value];
}

std::optional<NodeId> Topology::find_node(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

const Interface* Topology::find_interface(const InterfaceId& id) const {
  if (id.node.value >= nodes_.size()) return nullptr;
  return nodes_[id.node.value].find_interface(id.ordinal);
}

const Interface& Topology::interface(const InterfaceId& id) const {
  const Interface* iface = find_interface(id);
  if (iface == nullptr) {
    throw Error(ErrorCode::UnknownReference, "interface " + std::to_string(id.node.value) + "." +
                                                 std::to_string(id.ordinal));
  }
  return *iface;
}

Interface& Topology::mutable_interface(const InterfaceId& id) {
  return const_cast<Interface&>(interface(id));
}

const Interface* Topology::find_interface_by_name(NodeId id, std::string_view name) const {
  for (const auto& iface : node(id).interfaces)
    if (iface.name == name) return &iface;
  return nullptr;
}

std::optional<InterfaceId> Topology::find_interface_by_address(IpAddress addr) const {
  auto it = by_address_.find(addr);
  if (it == by_address_.end()) return std::nullopt;
  return it->second;
}

const Link& Topology::link(LinkId id) const {
  auto it = links_.find(id);
  if (it == links_.end()) throw Error(ErrorCode::UnknownReference, "link " + std::to_string(id.value));
  return it->second;
}

std::optional<LinkId> Topology::link_on(const InterfaceId& iface) const {
  auto it = link_by_iface_.find(iface);
  if (it == link_by_iface_.end()) return std::nullopt;
  return it->second;
}

std::optional<InterfaceId> Topology::peer(const InterfaceId& iface) const {
  auto l = link_on(iface);
  if (!l) return std::nullopt;
  return link(*l).peer_of(iface);
}

std::string Topology::describe(const InterfaceId& id) const {
  const Interface* iface = find_interface(id);
  std::string node_name = id.node.value < nodes_.size() ? nodes_[id.node.value].name : "?";
  return node_name + "." + (iface ? iface->name : std::to_string(id.ordinal));
}

}  // namespace msrsim::net
