#pragma once

#include <cstdint>

#include "msrsim/net/scenario.hpp"

namespace msrsim::testing {

struct GeneratorParams {
  int min_routers = 3;
  int max_routers = 10;
  int min_upfs = 1;
  int max_upfs = 2;
  int min_sessions = 1;
  int max_sessions = 4;
  int hosts = 2;
  Metric max_metric = 100;
  bool symmetric = false;  // equal costs in both directions on every link
  int extra_links = 2;     // router-router links beyond a spanning tree
};

/// Random connected scenario: external routers, UPFs reached through N6
/// links and PDU sessions, hosts hanging off routers. Same seed, same scenario.
net::Scenario generate_scenario(std::uint64_t seed, const GeneratorParams& params = {});

/// Random connected router-only graph (no mobile system), for SPF checks.
net::Scenario generate_router_graph(std::uint64_t seed, int routers, Metric max_metric = 50);

}  // namespace msrsim::testing
