#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "msrsim/net/scenario.hpp"
#include "msrsim/sim/simulation.hpp"

namespace msrsim::testing {

std::string source_path(std::string_view relative);
std::string fig2_path();
std::string read_file(const std::string& path);

/// Throws std::runtime_error with the diagnostics when the text is invalid.
net::Scenario parse_or_throw(std::string_view text);
net::Scenario load_scenario(const std::string& path);

std::unique_ptr<sim::Simulation> make_sim(const net::Scenario& scenario, msrouter::OperatingMode mode,
                                          sim::SimConfig config = {});
std::unique_ptr<sim::Simulation> run_sim(const net::Scenario& scenario, msrouter::OperatingMode mode,
                                         SimTime until = 10000, sim::SimConfig config = {});

net::IpAddress ip(std::string_view text);
net::IpPrefix prefix(std::string_view text);
net::NodeId node_id(const sim::Simulation& sim, std::string_view name);

/// Best route of `router` for the destination, if any.
const lsp::RoutingEntry* route_to(const sim::Simulation& sim, net::NodeId router, const net::IpPrefix& dst);

/// Every router's best table, rendered with interface names.
std::string routing_snapshot(const sim::Simulation& sim);
/// Trace reports for every ordered pair of host/router addresses that are
/// first interfaces of hosts and UE-side routers.
std::string all_pairs_traces(const sim::Simulation& sim);

}  // namespace msrsim::testing
