#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "msrsim/lsp/router.hpp"
#include "msrsim/net/topology.hpp"

namespace msrsim::msrouter {

enum class MsrInterfaceKind { N6, PduSession };

/// An interface of the per-UPF router: an N6 attachment or a PDU session.
struct MsrInterface {
  net::InterfaceId id;
  MsrInterfaceKind kind = MsrInterfaceKind::N6;
  std::uint32_t source_id = 0;  // N6 ordinal or PDU session id
  std::string name;
  net::IpAddress address;
  net::IpPrefix subnet;

  bool operator==(const MsrInterface&) const = default;
};

struct N6Attachment {
  net::InterfaceId id;
  net::IpAddress address;
  net::IpPrefix subnet;
};

struct SessionAttachment {
  std::uint32_t session_id = 0;
  net::InterfaceId id;
  net::IpAddress reserved_address;
  net::IpPrefix subnet;
};

/// Live N6 attachments and PDU sessions anchored at one UPF.
struct UpfAttachments {
  std::vector<N6Attachment> n6;
  std::vector<SessionAttachment> sessions;
};

/// N6 interfaces first by ordinal, then sessions by id; one entry per session
/// even when a UE holds several sessions at the same UPF.
std::vector<MsrInterface> enumerate_interfaces(const UpfAttachments& upf);

/// "n6-<ordinal>" / "pdu-<session id>".
std::string map_interface_name(MsrInterfaceKind kind, std::uint32_t source_id);

/// Lowest host address of ue_subnet that is neither the UE's address nor in
/// in_use; the result is added to in_use. Throws SubnetExhausted.
net::IpAddress reserve_pdu_iface_address(net::IpAddress ue_addr, const net::IpPrefix& ue_subnet,
                                         std::set<net::IpAddress>& in_use);

enum class OperatingMode { CpBased, UpBased };
std::string_view to_string(OperatingMode mode);

/// Compiled user-plane rule, the stand-in for a PFCP forwarding configuration.
struct ForwardingRule {
  net::IpPrefix match_prefix;
  net::IpAddress next_hop;
  net::InterfaceId egress;
  std::uint8_t priority = 0;  // prefix length; longer wins

  friend auto operator<=>(const ForwardingRule&, const ForwardingRule&) = default;
};

struct TranslateResult {
  std::vector<ForwardingRule> rules;
  std::vector<std::string> diagnostics;
};

/// One rule per destination (the cheapest entry wins if a table lists
/// several); entries whose interface no longer exists are dropped with a
/// diagnostic.
TranslateResult translate_routes(std::span<const lsp::RoutingEntry> table,
                                 std::span<const MsrInterface> interfaces);

/// The MS-Router of one UPF. Owns the protocol engine; whether the engine is
/// driven by the SMF or the UPF is decided by the mobile system.
class MsRouter {
 public:
  /// The router id is the highest N6 address (highest of `fallback` when the
  /// UPF has no N6 interface).
  MsRouter(net::NodeId upf, OperatingMode mode, std::vector<N6Attachment> n6,
           lsp::ProtocolTimers timers = {}, std::optional<net::IpAddress> fallback = std::nullopt);

  net::NodeId upf() const { return upf_; }
  lsp::RouterId router_id() const { return engine_.id(); }
  OperatingMode mode() const { return mode_; }

  void attach_session(const SessionAttachment& session);
  void detach_session(std::uint32_t session_id);

  const UpfAttachments& attachments() const { return attachments_; }
  std::vector<MsrInterface> interfaces() const { return enumerate_interfaces(attachments_); }
  std::optional<MsrInterface> find_interface(const net::InterfaceId& id) const;
  std::optional<MsrInterface> find_interface(std::string_view name) const;

  lsp::LinkStateRouter& engine() { return engine_; }
  const lsp::LinkStateRouter& engine() const { return engine_; }

 private:
  net::NodeId upf_;
  OperatingMode mode_;
  UpfAttachments attachments_;
  lsp::LinkStateRouter engine_;
};

}  // namespace msrsim::msrouter
