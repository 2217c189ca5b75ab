#pragma once

#include <optional>
#include <span>
#include <vector>

#include "msrsim/lsp/lsdb.hpp"
#include "msrsim/lsp/messages.hpp"
#include "msrsim/lsp/spf.hpp"

namespace msrsim::lsp {

enum class NeighborState { Init, Full };

struct NeighborRecord {
  RouterId id;
  net::InterfaceId via_interface;
  net::IpAddress address;
  NeighborState state = NeighborState::Init;
  SimTime last_heard_ms = 0;

  bool operator==(const NeighborRecord&) const = default;
};

enum class NeighborEventKind {
  NoChange,
  NewNeighbor,    // first hello, adjacency pending (Init)
  NewAdjacency,   // reached Full
  Refreshed,
  AdjacencyLost,  // neighbor stopped listing us (Full -> Init)
  Removed,        // dead interval elapsed or interface gone
};

std::string_view to_string(NeighborEventKind kind);

struct NeighborEvent {
  NeighborEventKind kind = NeighborEventKind::NoChange;
  RouterId neighbor;
  net::InterfaceId via;

  bool operator==(const NeighborEvent&) const = default;
};

struct Emission {
  net::InterfaceId iface;
  RoutingMessage message;
};

/// Everything a driver must act on after feeding the router one stimulus.
struct StepResult {
  std::vector<Emission> emissions;
  std::vector<NeighborEvent> neighbor_events;
  std::optional<Lsa> originated;
  std::vector<Lsa> installed;
  bool table_changed = false;
};

/// One participant of the link-state protocol. A pure state machine: time is
/// passed in, messages come out in StepResult; it owns no timers and sends
/// nothing itself, so the same engine runs inside an external router, an
/// SMF (on behalf of a UPF) or a UPF.
class LinkStateRouter {
 public:
  explicit LinkStateRouter(RouterId id, ProtocolTimers timers = {});

  RouterId id() const { return id_; }
  const ProtocolTimers& timers() const { return timers_; }
  bool started() const { return started_; }

  // Interface set. Callers follow mutations with interfaces_changed().
  void add_interface(const RouterInterface& iface);
  void remove_interface(const net::InterfaceId& iface);
  void set_interface_cost(const net::InterfaceId& iface, Metric cost);
  void set_interface_up(const net::InterfaceId& iface, bool up);
  std::span<const RouterInterface> interfaces() const { return interfaces_; }
  const RouterInterface* find_interface(const net::InterfaceId& iface) const;

  // Protocol primitives.

  /// Throws Error(InterfaceDown) for an administratively down interface.
  HelloMsg make_hello(const net::InterfaceId& iface, SimTime now) const;
  NeighborEvent process_hello(const net::InterfaceId& iface, const HelloMsg& msg, SimTime now);
  /// Builds the next own LSA (seq + 1) and installs it locally.
  Lsa originate_lsa(SimTime now);
  InstallResult install(const Lsa& lsa);
  /// Copies of an Installed LSA for every Full neighbor except the arrival interface.
  std::vector<Emission> flood(const Lsa& lsa, InstallResult result,
                              std::optional<net::InterfaceId> arrival) const;
  /// Drops neighbors silent for a dead interval, ordered by RouterId.
  std::vector<NeighborEvent> expire(SimTime now);
  std::vector<RoutingEntry> compute_spf() const;
  std::vector<RoutingEntry> compute_candidates() const;

  // Driver entry points.

  StepResult start(SimTime now);
  /// Hello-interval tick: expiry, then hellos on every linked up interface.
  StepResult tick(SimTime now);
  StepResult receive(const net::InterfaceId& iface, const RoutingMessage& msg, SimTime now);
  StepResult interfaces_changed(SimTime now);

  const Lsdb& lsdb() const { return lsdb_; }
  const std::vector<NeighborRecord>& neighbors() const { return neighbors_; }
  const std::vector<RoutingEntry>& table() const { return table_; }
  std::uint32_t own_seq() const { return own_seq_; }

 private:
  std::vector<LsaEntry> own_entries() const;
  RouterInterface* mutable_interface(const net::InterfaceId& iface);
  void reoriginate_if_changed(SimTime now, StepResult& out, bool force = false);
  void recompute(StepResult& out);

  RouterId id_;
  ProtocolTimers timers_;
  bool started_ = false;
  std::vector<RouterInterface> interfaces_;  // sorted by id
  std::vector<NeighborRecord> neighbors_;
  Lsdb lsdb_;
  std::uint32_t own_seq_ = 0;
  std::vector<RoutingEntry> table_;
};

}  // namespace msrsim::lsp
