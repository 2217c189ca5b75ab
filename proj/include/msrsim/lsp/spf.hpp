#pragma once

#include <span>
#include <vector>

#include "msrsim/lsp/lsdb.hpp"

namespace msrsim::lsp {

/// A router's view of one of its own interfaces.
struct RouterInterface {
  net::InterfaceId id;
  net::IpAddress address;
  net::IpPrefix subnet;
  Metric cost = 0;      // leaving through this interface; meaningful when linked
  bool linked = false;  // a link is attached (to a router or a host)
  bool up = true;

  bool operator==(const RouterInterface&) const = default;
};

/// Shortest paths from `self` over the adjacencies both endpoints advertise.
/// One entry per reachable prefix not attached to self; equal costs resolve
/// to the lowest next-hop address, then the lowest egress ordinal.
std::vector<RoutingEntry> compute_spf(const Lsdb& lsdb, RouterId self,
                                      std::span<const RouterInterface> interfaces);

/// Every usable first hop per destination: for each adjacency of self, the
/// cheapest way to reach each prefix when the path starts with that hop and
/// never returns to self. Sorted by (destination, metric).
std::vector<RoutingEntry> compute_candidates(const Lsdb& lsdb, RouterId self,
                                             std::span<const RouterInterface> interfaces);

}  // namespace msrsim::lsp
