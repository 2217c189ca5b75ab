#include "msrsim/fwd/forwarding.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace msrsim::fwd {

ForwardingTable from_routing_entries(std::span<const lsp::RoutingEntry> entries) {
  ForwardingTable table;
  for (const auto& e : entries) {
    table.push_back(Route{e.destination, e.next_hop, e.destination_interface, e.metric,
                          static_cast<std::uint8_t>(e.destination.length())});
  }
  return table;
}

ForwardingTable from_rules(std::span<const msrouter::ForwardingRule> rules) {
  ForwardingTable table;
  for (const auto& r : rules) table.push_back(Route{r.match_prefix, r.next_hop, r.egress, 0, r.priority});
  return table;
}

ForwardingTable host_table(const net::Topology& topology, net::NodeId host) {
  ForwardingTable table;
  for (const auto& i : topology.node(host).interfaces) {
    if (auto peer = topology.peer(i.id)) {
      table.push_back(Route{net::IpPrefix{}, topology.interface(*peer).address, i.id, 0, 0});
    }
  }
  return table;
}

LookupResult lookup(const net::Topology& topology, net::NodeId node, const ForwardingTable& table,
                    net::IpAddress dst) {
  const auto& n = topology.node(node);
  for (const auto& i : n.interfaces) {
    if (i.address == dst) return Deliver{};
  }
  const Route* best = nullptr;
  Route connected;
  auto better = [](const Route& a, const Route& b) {
    return std::make_tuple(-a.prefix.length(), -int{a.priority}, a.metric, a.next_hop) <
           std::make_tuple(-b.prefix.length(), -int{b.priority}, b.metric, b.next_hop);
  };
  for (const auto& i : n.interfaces) {
    auto peer = topology.peer(i.id);
    if (!peer) continue;
    auto peer_addr = topology.interface(*peer).address;
    if (peer_addr == dst) {
      connected = Route{net::IpPrefix(dst, 32), dst, i.id, 0, 32};
      best = &connected;
      break;
    }
  }
  for (const auto& r : table) {
    if (!r.prefix.contains(dst)) continue;
    if (best == nullptr || better(r, *best)) best = &r;
  }
  if (best == nullptr) return NoRoute{};
  return Forward{best->next_hop, best->egress};
}

const ForwardingTable& DataPlane::table(net::NodeId node) const {
  static const ForwardingTable empty;
  auto it = tables.find(node);
  return it == tables.end() ? empty : it->second;
}

std::string_view to_string(TraceOutcome outcome) {
  switch (outcome) {
    case TraceOutcome::Delivered: return "delivered";
    case TraceOutcome::NoRoute: return "no-route";
    case TraceOutcome::TtlExceeded: return "ttl-exceeded";
    case TraceOutcome::LinkDown: return "link-down";
  }
  return "?";
}

std::vector<net::NodeId> TraceRecord::path() const {
  std::vector<net::NodeId> out;
  for (const auto& h : hops) out.push_back(h.node);
  return out;
}

TraceRecord forward_packet(const DataPlane& plane, net::NodeId src_node, Packet packet) {
  const auto& topo = plane.topology;
  TraceRecord rec;
  rec.packet = packet;
  rec.hops.push_back(Hop{src_node, std::nullopt, std::nullopt});
  net::NodeId node = src_node;
  while (true) {
    auto result = lookup(topo, node, plane.table(node), packet.dst);
    if (std::holds_alternative<Deliver>(result)) {
      rec.outcome = TraceOutcome::Delivered;
      break;
    }
    const auto* fwd = std::get_if<Forward>(&result);
    auto link = fwd ? topo.link_on(fwd->egress) : std::nullopt;
    if (!link) {
      rec.outcome = TraceOutcome::NoRoute;
      rec.failed_at = node;
      break;
    }
    if (--packet.ttl <= 0) {
      rec.outcome = TraceOutcome::TtlExceeded;
      rec.failed_at = node;
      break;
    }
    const auto& l = topo.link(*link);
    rec.hops.back().egress = fwd->egress;
    if (!l.up()) {
      rec.outcome = TraceOutcome::LinkDown;
      rec.failed_link = *link;
      break;
    }
    rec.total_metric += l.metric_from(fwd->egress);
    auto ingress = l.peer_of(fwd->egress);
    node = ingress.node;
    rec.hops.push_back(Hop{node, ingress, std::nullopt});
  }
  rec.packet.ttl = packet.ttl;
  return rec;
}

std::string trace_report(const net::Topology& topology, const TraceRecord& record) {
  std::ostringstream os;
  auto iface = [&](const std::optional<net::InterfaceId>& id) {
    return id ? topology.interface(*id).name : std::string("-");
  };
  for (std::size_t i = 0; i < record.hops.size(); ++i) {
    const auto& h = record.hops[i];
    os << i << ' ' << topology.node(h.node).name << " in=" << iface(h.ingress) << " out=" << iface(h.egress);
    if (h.egress) {
      if (auto link = topology.link_on(*h.egress)) os << " cost=" << topology.link(*link).metric_from(*h.egress);
    }
    os << '\n';
  }
  os << "trace-v1 result=" << to_string(record.outcome) << " src=" << record.packet.src.to_string()
     << " dst=" << record.packet.dst.to_string() << " hops=" << record.hops.size()
     << " total_metric=" << record.total_metric << " tag=" << (record.packet.tag.empty() ? "-" : record.packet.tag);
  if (record.failed_at) os << " at=" << topology.node(*record.failed_at).name;
  if (record.failed_link) {
    const auto& l = topology.link(*record.failed_link);
    os << " link=" << topology.describe(l.a) << '~' << topology.describe(l.b);
  }
  os << '\n';
  return os.str();
}

}  // namespace msrsim::fwd
