#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "msrsim/event_log.hpp"
#include "msrsim/mobile/messages.hpp"
#include "msrsim/msrouter/ms_router.hpp"
#include "msrsim/net/topology.hpp"

namespace msrsim::mobile {

/// What the mobile system needs from its environment. The simulator provides
/// delivery with latency; tests can record calls directly.
class Outbox {
 public:
  virtual ~Outbox() = default;
  /// Puts bytes on the link attached to `egress` with the given source address.
  virtual void send_on_wire(const net::InterfaceId& egress, net::IpAddress src, Bytes bytes) = 0;
  virtual void send_channel(net::NodeId from, net::NodeId to, ChannelPayload payload) = 0;
  /// Requests on_router_timer(upf, at) at simulated time `at`.
  virtual void schedule_router_timer(net::NodeId upf, SimTime at) = 0;
  /// A UE's interface set changed (session established or released).
  virtual void external_interfaces_changed(net::NodeId node, SimTime now) = 0;
  virtual void log(LogRecord rec) = 0;
};

enum class SessionState { Active, Released };

struct PduSession {
  std::uint32_t id = 0;
  net::NodeId ue;
  net::NodeId upf;
  net::IpAddress ue_addr;
  net::IpPrefix ue_subnet;
  net::IpAddress reserved_addr;
  SessionState state = SessionState::Active;
  net::InterfaceId upf_iface;
  net::InterfaceId ue_iface;

  bool operator==(const PduSession&) const = default;
};

struct SessionRequest {
  net::NodeId ue;
  net::NodeId upf;
  net::IpAddress ue_addr;
  net::IpPrefix ue_subnet;
  Metric ue_to_upf = 1;
  Metric upf_to_ue = 1;
};

/// The 5GS side of the simulation: UPFs with their MS-Routers, the SMF, PDU
/// sessions, GTP relay tunnels and the CP<->UP configuration channel. The
/// topology is shared with the simulator; this class is the only writer of
/// UPF interfaces.
class MobileSystem {
 public:
  MobileSystem(net::Topology& topology, Outbox& outbox, msrouter::OperatingMode mode,
               lsp::ProtocolTimers timers = {});

  msrouter::OperatingMode mode() const { return mode_; }

  // Construction: N6 interfaces first, then finalize() creates the MS-Routers.
  net::InterfaceId attach_n6(net::NodeId upf, std::uint32_t ordinal, net::IpAddress address,
                             net::IpPrefix subnet);
  void finalize();
  /// Step 1 (and 2) of either approach, then the routing engines start.
  void start(SimTime now);

  /// Throws AddressInUse, UnknownReference, SubnetExhausted.
  const PduSession& establish_pdu_session(const SessionRequest& request, SimTime now);
  /// Throws UnknownSession.
  void release_pdu_session(std::uint32_t session_id, SimTime now);

  // Approach 1 primitives. Throw ModeMismatch outside CpBased mode.
  void cp_configure_relay(net::NodeId smf, net::NodeId upf, SimTime now);
  /// Throws UnknownInterface when iface is not an interface of the UPF.
  void cp_send_routing_msg(net::NodeId smf, net::NodeId upf, const net::InterfaceId& iface,
                           const lsp::RoutingMessage& msg, SimTime now);
  /// Throws UnknownTeid, or InvariantViolation for an undecodable payload.
  std::pair<msrouter::MsrInterface, lsp::RoutingMessage> cp_receive_routing_msg(net::NodeId smf, Teid teid,
                                                                                 const Bytes& payload);

  // Approach 2 primitives. Throw ModeMismatch outside UpBased mode.
  void up_trigger_routing(net::NodeId smf, net::NodeId upf, SimTime now);
  void up_report_table(net::NodeId upf, net::NodeId smf, const std::vector<lsp::RoutingEntry>& table,
                       SimTime now);

  /// Atomically replaces the UPF's forwarding rules. Throws InvalidRule.
  void install_rules(net::NodeId upf, std::vector<msrouter::ForwardingRule> rules);

  // Environment callbacks.
  void on_wire_receive(const net::InterfaceId& ingress, net::IpAddress src, const Bytes& bytes, SimTime now);
  void on_channel_receive(net::NodeId from, net::NodeId to, const ChannelPayload& payload, SimTime now);
  void on_router_timer(net::NodeId upf, SimTime now);
  /// Re-reads cost / link / admin state of the UPF's interfaces from the topology.
  void refresh_interfaces(net::NodeId upf, SimTime now);

  /// Invariant violations, empty when healthy.
  std::vector<std::string> audit() const;

  std::optional<net::NodeId> smf() const { return smf_; }
  std::vector<net::NodeId> upfs() const;
  const msrouter::MsRouter& router(net::NodeId upf) const;
  const msrouter::MsRouter* find_router(net::NodeId upf) const;
  /// "msr<k>" for the k-th UPF in declaration order.
  std::string router_name(net::NodeId upf) const;
  const std::vector<msrouter::ForwardingRule>& installed_rules(net::NodeId upf) const;
  const std::map<std::uint32_t, PduSession>& sessions() const { return sessions_; }
  const PduSession* find_session(std::uint32_t id) const;
  /// SMF-side tunnel table of a UPF (empty in UpBased mode).
  std::vector<GtpTunnel> tunnels(net::NodeId upf) const;
  /// Tunnels the UPF has been configured with so far.
  std::vector<GtpTunnel> relay_table(net::NodeId upf) const;

 private:
  struct UpfState {
    std::uint32_t index = 0;
    std::vector<msrouter::N6Attachment> n6;
    std::optional<msrouter::MsRouter> router;
    std::map<Teid, GtpTunnel> tunnels;        // SMF side
    std::map<Teid, net::InterfaceId> relay;   // UPF side, last ConfigureRelay
    std::vector<msrouter::ForwardingRule> rules;
    bool routing_active = false;
  };

  UpfState& state(net::NodeId upf);
  const UpfState& state(net::NodeId upf) const;
  std::string name(net::NodeId node) const;
  net::NodeId require_smf() const;
  void require_mode(msrouter::OperatingMode mode, std::string_view op) const;
  void sync_engine_interfaces(UpfState& st);
  void start_engine(net::NodeId upf, SimTime now);
  void handle_step(net::NodeId upf, const lsp::StepResult& step, SimTime now);
  void publish_table(net::NodeId upf, SimTime now);
  void send_install(net::NodeId upf, const std::vector<lsp::RoutingEntry>& table, SimTime now);
  LogRecord step(SimTime now, net::NodeId entity, int number, std::string label) const;

  net::Topology& topology_;
  Outbox& outbox_;
  msrouter::OperatingMode mode_;
  lsp::ProtocolTimers timers_;
  std::optional<net::NodeId> smf_;
  std::map<net::NodeId, UpfState> upfs_;
  std::map<std::uint32_t, PduSession> sessions_;
  std::uint32_t next_session_ = 1;
  Teid next_teid_ = 0x1000;
  bool finalized_ = false;
  bool started_ = false;
};

}  // namespace msrsim::mobile
