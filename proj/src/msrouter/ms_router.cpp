#include "msrsim/msrouter/ms_router.hpp"

#include <algorithm>
#include <map>

#include "msrsim/errors.hpp"

namespace msrsim::msrouter {

std::vector<MsrInterface> enumerate_interfaces(const UpfAttachments& upf) {
  std::vector<MsrInterface> out;
  auto n6 = upf.n6;
  std::sort(n6.begin(), n6.end(), [](const auto& a, const auto& b) { return a.id.ordinal < b.id.ordinal; });
  for (const auto& a : n6) {
    out.push_back(MsrInterface{a.id, MsrInterfaceKind::N6, a.id.ordinal,
                               map_interface_name(MsrInterfaceKind::N6, a.id.ordinal), a.address, a.subnet});
  }
  auto sessions = upf.sessions;
  std::sort(sessions.begin(), sessions.end(),
            [](const auto& a, const auto& b) { return a.session_id < b.session_id; });
  for (const auto& s : sessions) {
    out.push_back(MsrInterface{s.id, MsrInterfaceKind::PduSession, s.session_id,
                               map_interface_name(MsrInterfaceKind::PduSession, s.session_id),
                               s.reserved_address, s.subnet});
  }
  return out;
}

std::string map_interface_name(MsrInterfaceKind kind, std::uint32_t source_id) {
  return (kind == MsrInterfaceKind::N6 ? "n6-" : "pdu-") + std::to_string(source_id);
}

net::IpAddress reserve_pdu_iface_address(net::IpAddress ue_addr, const net::IpPrefix& ue_subnet,
                                         std::set<net::IpAddress>& in_use) {
  if (!ue_subnet.contains(ue_addr)) {
    throw Error(ErrorCode::InvariantViolation, ue_addr.to_string() + " is outside " + ue_subnet.to_string());
  }
  auto [first, last] = ue_subnet.host_range();
  for (std::uint64_t v = first.value(); v <= last.value(); ++v) {
    net::IpAddress candidate{static_cast<std::uint32_t>(v)};
    if (candidate == ue_addr || in_use.contains(candidate)) continue;
    in_use.insert(candidate);
    return candidate;
  }
  throw Error(ErrorCode::SubnetExhausted, ue_subnet.to_string());
}

std::string_view to_string(OperatingMode mode) {
  return mode == OperatingMode::CpBased ? "cp" : "up";
}

TranslateResult translate_routes(std::span<const lsp::RoutingEntry> table,
                                 std::span<const MsrInterface> interfaces) {
  TranslateResult out;
  std::map<net::IpPrefix, const lsp::RoutingEntry*> best;
  for (const auto& e : table) {
    auto iface = std::find_if(interfaces.begin(), interfaces.end(),
                              [&](const MsrInterface& i) { return i.id == e.destination_interface; });
    if (iface == interfaces.end()) {
      out.diagnostics.push_back("dropped " + e.destination.to_string() + " via " + e.next_hop.to_string() +
                                ": interface no longer exists");
      continue;
    }
    auto [it, fresh] = best.try_emplace(e.destination, &e);
    if (!fresh && e.metric < it->second->metric) it->second = &e;
  }
  for (const auto& [prefix, e] : best) {
    out.rules.push_back(ForwardingRule{prefix, e->next_hop, e->destination_interface,
                                       static_cast<std::uint8_t>(prefix.length())});
  }
  return out;
}

namespace {

lsp::RouterId pick_router_id(const std::vector<N6Attachment>& n6, std::optional<net::IpAddress> fallback) {
  net::IpAddress best{};
  bool any = false;
  for (const auto& a : n6) {
    if (!any || best < a.address) best = a.address;
    any = true;
  }
  if (!any && fallback) best = *fallback;
  return lsp::RouterId::from_address(best);
}

}  // namespace

MsRouter::MsRouter(net::NodeId upf, OperatingMode mode, std::vector<N6Attachment> n6,
                   lsp::ProtocolTimers timers, std::optional<net::IpAddress> fallback)
    : upf_(upf), mode_(mode), engine_(pick_router_id(n6, fallback), timers) {
  attachments_.n6 = std::move(n6);
}

void MsRouter::attach_session(const SessionAttachment& session) {
  attachments_.sessions.push_back(session);
}

void MsRouter::detach_session(std::uint32_t session_id) {
  std::erase_if(attachments_.sessions, [&](const SessionAttachment& s) { return s.session_id == session_id; });
}

std::optional<MsrInterface> MsRouter::find_interface(const net::InterfaceId& id) const {
  for (auto& i : interfaces())
    if (i.id == id) return i;
  return std::nullopt;
}

std::optional<MsrInterface> MsRouter::find_interface(std::string_view name) const {
  for (auto& i : interfaces())
    if (i.name == name) return i;
  return std::nullopt;
}

}  // namespace msrsim::msrouter
