#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "msrsim/event_log.hpp"
#include "msrsim/fwd/forwarding.hpp"
#include "msrsim/lsp/router.hpp"
#include "msrsim/mobile/mobile_system.hpp"
#include "msrsim/net/scenario.hpp"
#include "msrsim/sim/event_queue.hpp"

namespace msrsim::sim {

struct SimConfig {
  msrouter::OperatingMode mode = msrouter::OperatingMode::CpBased;
  SimTime link_latency_ms = 1;
  SimTime channel_latency_ms = 1;
  /// Probability of dropping a frame on the wire; 0 keeps runs loss-free.
  double loss_rate = 0.0;
  /// Overrides the scenario's seed when set.
  std::optional<std::uint64_t> seed;
  lsp::ProtocolTimers timers;
  /// Keep a copy of every frame put on the wire.
  bool record_wire = false;
};

struct RunStats {
  std::map<EventKind, std::uint64_t> counts;
  std::uint64_t processed = 0;
  bool quiescent = false;
  SimTime now = 0;

  bool operator==(const RunStats&) const = default;
};

struct WireFrame {
  SimTime time = 0;
  net::InterfaceId egress;
  net::IpAddress src;
  Bytes bytes;
};

/// One instantiated scenario: topology, external routers, the mobile system
/// and the event queue driving them. Single-threaded and deterministic for a
/// given (scenario, config).
class Simulation : private mobile::Outbox {
 public:
  /// Throws Error when the scenario cannot be instantiated.
  Simulation(const net::Scenario& scenario, SimConfig config);
  ~Simulation() override;
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Processes every event with time <= t; the clock ends at t.
  RunStats run_until(SimTime t);
  /// Schedules a scripted action. Throws UnknownTarget for names that do not
  /// resolve, TimeInPast for t < now().
  void inject(SimTime t, const net::ScriptedAction& action);

  SimTime now() const { return queue_.now(); }
  std::uint64_t seed() const { return seed_; }
  const SimConfig& config() const { return config_; }
  const net::Topology& topology() const { return topology_; }
  const EventLog& log() const { return log_; }
  const EventQueue& queue() const { return queue_; }
  const mobile::MobileSystem& mobile() const { return *mobile_; }
  mobile::MobileSystem& mobile() { return *mobile_; }
  const std::vector<WireFrame>& wire_frames() const { return wire_; }

  /// Routing engine of an external router, or the MS-Router engine of a UPF.
  const lsp::LinkStateRouter* engine(net::NodeId node) const;
  /// "msr<k>", a UPF name or an external router name.
  std::optional<net::NodeId> resolve_router(std::string_view name) const;
  /// Display name of a router node ("msr<k>" for UPFs).
  std::string router_name(net::NodeId node) const;
  /// Routing nodes (external routers, then UPFs) in node-id order.
  std::vector<net::NodeId> routers() const;

  fwd::DataPlane data_plane() const;

  /// No pending protocol work (hellos and timers excepted) and every routed
  /// link carries a two-way Full adjacency; no neighbor lingers on a down link.
  bool quiescent() const;
  /// Identical LSDBs within every connected group of routers.
  bool converged() const;
  std::vector<std::string> audit() const;

 private:
  // Outbox
  void send_on_wire(const net::InterfaceId& egress, net::IpAddress src, Bytes bytes) override;
  void send_channel(net::NodeId from, net::NodeId to, mobile::ChannelPayload payload) override;
  void schedule_router_timer(net::NodeId upf, SimTime at) override;
  void external_interfaces_changed(net::NodeId node, SimTime now) override;
  void log(LogRecord rec) override;

  void build(const net::Scenario& scenario);
  void dispatch(const Event& ev);
  void deliver_wire(const WireDelivery& d);
  void run_action(const net::ScriptedAction& action);
  void sync_external(net::NodeId node);
  void handle_external(net::NodeId node, const lsp::StepResult& step);
  void refresh_router(net::NodeId node);
  net::InterfaceId resolve_port(const net::PortRef& port) const;
  void validate_action(const net::ScriptedAction& action) const;
  bool is_periodic(const Event& ev) const;
  bool participates(net::NodeId node) const;

  SimConfig config_;
  std::uint64_t seed_ = 0;
  std::mt19937_64 rng_;
  net::Topology topology_;
  EventQueue queue_;
  EventLog log_;
  std::unique_ptr<mobile::MobileSystem> mobile_;
  std::map<net::NodeId, lsp::LinkStateRouter> engines_;
  std::vector<WireFrame> wire_;
};

}  // namespace msrsim::sim
