#pragma once

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "msrsim/lsp/messages.hpp"
#include "msrsim/msrouter/ms_router.hpp"
#include "msrsim/net/topology.hpp"

namespace msrsim::mobile {

using Teid = std::uint32_t;

/// SMF <-> UPF tunnel carrying routing messages for one MS-Router interface.
struct GtpTunnel {
  Teid teid = 0;
  net::NodeId smf;
  net::NodeId upf;
  net::InterfaceId bound_interface;

  friend auto operator<=>(const GtpTunnel&, const GtpTunnel&) = default;
};

/// GTP framing reduced to (teid, payload); `upf` names the tunnel's UPF end.
struct GtpFrame {
  Teid teid = 0;
  net::NodeId upf;
  Bytes payload;

  bool operator==(const GtpFrame&) const = default;
};

struct ConfigureRelay {
  std::vector<GtpTunnel> tunnels;
  bool operator==(const ConfigureRelay&) const = default;
};

struct InstallRules {
  std::vector<msrouter::ForwardingRule> rules;
  bool operator==(const InstallRules&) const = default;
};

struct TriggerRouting {
  bool operator==(const TriggerRouting&) const = default;
};

struct ReportTable {
  std::vector<lsp::RoutingEntry> table;
  bool operator==(const ReportTable&) const = default;
};

/// Configuration-channel message about one UPF's MS-Router.
struct CpUpMessage {
  net::NodeId upf;
  std::variant<ConfigureRelay, InstallRules, TriggerRouting, ReportTable> body;

  bool operator==(const CpUpMessage&) const = default;
};

std::string_view kind_name(const CpUpMessage& msg);

using ChannelPayload = std::variant<CpUpMessage, GtpFrame>;

}  // namespace msrsim::mobile
