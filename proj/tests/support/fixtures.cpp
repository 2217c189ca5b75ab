#include "fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "msrsim/msrouter/table_dump.hpp"

namespace msrsim::testing {

std::string source_path(std::string_view relative) { return std::string(MSRSIM_SOURCE_DIR) + "/" + std::string(relative); }

std::string fig2_path() { return source_path("scenarios/fig2.scn"); }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

net::Scenario parse_or_throw(std::string_view text) {
  auto result = net::parse_scenario(text);
  if (!result.ok()) {
    std::string msg = "scenario rejected:";
    for (const auto& d : result.diagnostics) msg += "\n  " + d.to_string();
    throw std::runtime_error(msg);
  }
  return *result.scenario;
}

net::Scenario load_scenario(const std::string& path) { return parse_or_throw(read_file(path)); }

std::unique_ptr<sim::Simulation> make_sim(const net::Scenario& scenario, msrouter::OperatingMode mode,
                                          sim::SimConfig config) {
  config.mode = mode;
  return std::make_unique<sim::Simulation>(scenario, config);
}

std::unique_ptr<sim::Simulation> run_sim(const net::Scenario& scenario, msrouter::OperatingMode mode, SimTime until,
                                         sim::SimConfig config) {
  auto s = make_sim(scenario, mode, config);
  s->run_until(until);
  return s;
}

net::IpAddress ip(std::string_view text) {
  auto a = net::IpAddress::parse(text);
  if (!a) throw std::runtime_error("bad address " + std::string(text));
  return *a;
}

net::IpPrefix prefix(std::string_view text) {
  auto p = net::IpPrefix::parse(text);
  if (!p) throw std::runtime_error("bad prefix " + std::string(text));
  return *p;
}

net::NodeId node_id(const sim::Simulation& sim, std::string_view name) {
  auto id = sim.topology().find_node(name);
  if (!id) throw std::runtime_error("no node " + std::string(name));
  return *id;
}

const lsp::RoutingEntry* route_to(const sim::Simulation& sim, net::NodeId router, const net::IpPrefix& dst) {
  const auto* engine = sim.engine(router);
  if (engine == nullptr) return nullptr;
  for (const auto& e : engine->table()) {
    if (e.destination == dst) return &e;
  }
  return nullptr;
}

std::string routing_snapshot(const sim::Simulation& sim) {
  std::ostringstream os;
  auto namer = [&](const net::InterfaceId& id) { return sim.topology().interface(id).name; };
  for (auto r : sim.routers()) {
    os << "# " << sim.router_name(r) << '\n';
    os << msrouter::render_routing_table(msrouter::make_dump_rows(sim.engine(r)->table(), namer, {}));
  }
  for (auto upf : sim.mobile().upfs()) {
    os << "# rules " << sim.mobile().router_name(upf) << '\n';
    for (const auto& rule : sim.mobile().installed_rules(upf)) {
      os << rule.match_prefix.to_string() << ' ' << rule.next_hop.to_string() << ' '
         << sim.topology().interface(rule.egress).name << '\n';
    }
  }
  return os.str();
}

std::string all_pairs_traces(const sim::Simulation& sim) {
  const auto& topo = sim.topology();
  std::vector<std::pair<net::NodeId, net::IpAddress>> endpoints;
  for (const auto& n : topo.nodes()) {
    if (n.interfaces.empty()) continue;
    if (n.kind == net::NodeKind::Host || n.kind == net::NodeKind::UeRouter || n.kind == net::NodeKind::Ue) {
      endpoints.emplace_back(n.id, n.interfaces.front().address);
    }
  }
  auto plane = sim.data_plane();
  std::string out;
  for (const auto& [src_node, src] : endpoints) {
    for (const auto& [dst_node, dst] : endpoints) {
      auto rec = fwd::forward_packet(plane, src_node, fwd::Packet{src, dst, fwd::kDefaultTtl, "pair"});
      out += fwd::trace_report(topo, rec);
    }
  }
  return out;
}

}  // namespace msrsim::testing
