#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "msrsim/errors.hpp"
#include "msrsim/net/ip.hpp"
#include "msrsim/net/topology.hpp"
#include "msrsim/types.hpp"

namespace msrsim::net {

/// `<node>.<port>` where port is an ordinal ("2") or an interface name
/// ("eth2", "n6-2", "pdu-3").
struct PortRef {
  std::string node;
  std::string port;

  std::string to_string() const { return node + "." + port; }
  bool operator==(const PortRef&) const = default;
};

struct NodeDecl {
  std::string name;
  NodeKind kind = NodeKind::Host;
  bool operator==(const NodeDecl&) const = default;
};

struct InterfaceDecl {
  std::string node;
  std::uint32_t ordinal = 0;
  IpAddress address;
  IpPrefix subnet;
  bool operator==(const InterfaceDecl&) const = default;
};

struct LinkDecl {
  PortRef a;
  PortRef b;
  Metric metric_ab = 1;
  Metric metric_ba = 1;
  bool operator==(const LinkDecl&) const = default;
};

struct PduDecl {
  std::string ue;
  std::string upf;
  IpAddress ue_address;
  IpPrefix ue_subnet;
  Metric ue_to_upf = 1;
  Metric upf_to_ue = 1;
  bool operator==(const PduDecl&) const = default;
};

struct LinkDownAction {
  PortRef port;
  bool operator==(const LinkDownAction&) const = default;
};
struct LinkUpAction {
  PortRef port;
  bool operator==(const LinkUpAction&) const = default;
};
/// metric_out applies leaving `port`, metric_in arriving at it.
struct MetricChangeAction {
  PortRef port;
  Metric metric_out = 1;
  Metric metric_in = 1;
  bool operator==(const MetricChangeAction&) const = default;
};
struct PduEstablishAction {
  PduDecl session;
  bool operator==(const PduEstablishAction&) const = default;
};
struct PduReleaseAction {
  std::uint32_t session_id = 0;
  bool operator==(const PduReleaseAction&) const = default;
};

using ScriptedAction = std::variant<LinkDownAction, LinkUpAction, MetricChangeAction,
                                    PduEstablishAction, PduReleaseAction>;

struct EventDecl {
  SimTime time = 0;
  ScriptedAction action;
  bool operator==(const EventDecl&) const = default;
};

/// A validated, declarative scenario. Node ids are assigned in declaration
/// order when it is instantiated; PDU session ids are 1.. in [pdu]
/// declaration order, then continue in event order.
struct Scenario {
  std::vector<NodeDecl> nodes;
  std::vector<InterfaceDecl> interfaces;
  std::vector<LinkDecl> links;
  std::vector<PduDecl> pdus;
  std::vector<EventDecl> events;
  std::uint64_t seed = 0;

  bool operator==(const Scenario&) const = default;
};

struct Diagnostic {
  int line = 0;  // 0 when not tied to one line
  ErrorCode code = ErrorCode::SyntaxError;
  std::string message;

  std::string to_string() const;
};

struct ParseResult {
  std::optional<Scenario> scenario;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return scenario.has_value(); }
};

/// Never throws; either a validated Scenario or the diagnostics explaining why not.
ParseResult parse_scenario(std::string_view text);

/// Canonical text form; parse_scenario(serialize_scenario(s)) yields s.
std::string serialize_scenario(const Scenario& scenario);

/// Ordinal of a numeric, "eth<k>" or "n6-<k>" port.
std::optional<std::uint32_t> port_ordinal(std::string_view port);
/// Session id of a "pdu-<k>" port.
std::optional<std::uint32_t> port_session(std::string_view port);

std::string_view action_name(const ScriptedAction& action);

}  // namespace msrsim::net
