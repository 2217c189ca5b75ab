#pragma once

#include "json.hpp"
#include "msrsim/net/topology.hpp"

namespace msrsim::net {

/// JSON form of a Topology, preserving node, interface and link ids so that
/// forwarding state stored alongside it stays valid.
struct TopologyCodec {
  static nlohmann::json encode(const Topology& topology);
  /// Throws Error(InvariantViolation) on malformed input.
  static Topology decode(const nlohmann::json& doc);
};

}  // namespace msrsim::net
