#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "msrsim/lsp/messages.hpp"

namespace msrsim::msrouter {

struct DumpRow {
  std::string destination;
  std::string next_hop;
  std::string interface;
  Metric metric = 0;

  bool operator==(const DumpRow&) const = default;
};

struct HostLabel {
  net::IpAddress address;
  net::IpPrefix subnet;
  std::string name;
};

using InterfaceNamer = std::function<std::string(const net::InterfaceId&)>;

/// One row per entry, plus a "<addr>/32 (<host>)" row for every host whose
/// subnet is a destination. Sorted by (destination, metric).
std::vector<DumpRow> make_dump_rows(std::span<const lsp::RoutingEntry> entries, const InterfaceNamer& namer,
                                    std::span<const HostLabel> hosts);

/// Aligned four-column table headed
/// `Destination | Next Hop | Destination interface | Metric`.
std::string render_routing_table(std::span<const DumpRow> rows);

/// Inverse of render_routing_table for the data rows; used by tooling/tests.
std::vector<DumpRow> parse_routing_table(std::string_view text);

}  // namespace msrsim::msrouter
