#include "msrsim/cli/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "msrsim/errors.hpp"
#include "msrsim/msrouter/table_dump.hpp"
#include "msrsim/net/scenario.hpp"
#include "msrsim/net/topology_codec.hpp"
#include "msrsim/sim/simulation.hpp"

namespace msrsim::cli {

namespace {

using nlohmann::json;

json entry_json(const lsp::RoutingEntry& e) {
  return {{"destination", e.destination.to_string()},
          {"next_hop", e.next_hop.to_string()},
          {"ordinal", e.destination_interface.ordinal},
          {"metric", e.metric}};
}

net::IpAddress parse_address(const json& j) {
  auto a = net::IpAddress::parse(j.get<std::string>());
  if (!a) throw Error(ErrorCode::InvariantViolation, "bad address in state file");
  return *a;
}

net::IpPrefix parse_prefix(const json& j) {
  auto p = net::IpPrefix::parse(j.get<std::string>());
  if (!p) throw Error(ErrorCode::InvariantViolation, "bad prefix in state file");
  return *p;
}

lsp::RoutingEntry entry_from(const json& j, net::NodeId node) {
  return lsp::RoutingEntry{parse_prefix(j.at("destination")), parse_address(j.at("next_hop")),
                           net::InterfaceId{node, j.at("ordinal").get<std::uint32_t>()},
                           j.at("metric").get<Metric>()};
}

std::vector<msrouter::HostLabel> host_labels(const net::Topology& topology) {
  std::vector<msrouter::HostLabel> hosts;
  for (const auto& n : topology.nodes()) {
    if (n.kind != net::NodeKind::Host) continue;
    for (const auto& i : n.interfaces) hosts.push_back(msrouter::HostLabel{i.address, i.subnet, n.name});
  }
  return hosts;
}

/// A scenario run to completion, or the exit code explaining why not.
struct Executed {
  int code = kExitOk;
  std::unique_ptr<sim::Simulation> sim;
  sim::RunStats stats;
};

Executed execute(const CliConfig& config, std::ostream& err) {
  Executed ex;
  if (!config.approach) {
    err << "error: --approach cp|up is required\n";
    ex.code = kExitParse;
    return ex;
  }
  std::ifstream in(config.scenario_path);
  if (!in) {
    err << "error: cannot read scenario " << config.scenario_path << '\n';
    ex.code = kExitParse;
    return ex;
  }
  std::stringstream text;
  text << in.rdbuf();
  auto parsed = net::parse_scenario(text.str());
  for (const auto& d : parsed.diagnostics) err << config.scenario_path << ':' << d.to_string() << '\n';
  if (!parsed.ok()) {
    ex.code = kExitParse;
    return ex;
  }
  sim::SimConfig sc;
  sc.mode = *config.approach;
  sc.seed = config.seed;
  try {
    ex.sim = std::make_unique<sim::Simulation>(*parsed.scenario, sc);
    ex.stats = ex.sim->run_until(config.until_ms);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    ex.code = kExitInvariant;
    ex.sim.reset();
  }
  return ex;
}

int report_error(const Error& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  switch (e.code()) {
    case ErrorCode::UnknownRouter:
    case ErrorCode::UnknownAddress: return kExitUnknown;
    case ErrorCode::SyntaxError: return kExitParse;
    default: return kExitInvariant;
  }
}

/// State for routes/trace: a fresh inline run or the persisted one.
std::optional<RunState> obtain_state(const CliConfig& config, std::ostream& err, int& code) {
  code = kExitOk;
  if (config.inline_run) {
    auto ex = execute(config, err);
    if (ex.code != kExitOk) {
      code = ex.code;
      return std::nullopt;
    }
    return capture(*ex.sim, config, ex.stats.quiescent);
  }
  return load_state(config.state_path);
}

}  // namespace

RunState capture(const sim::Simulation& sim, const CliConfig& config, bool quiescent) {
  RunState st;
  st.scenario_path = config.scenario_path;
  st.mode = sim.config().mode;
  st.until_ms = sim.now();
  st.seed = sim.seed();
  st.quiescent = quiescent;
  st.converged = sim.converged();
  st.topology = sim.topology();
  for (auto node : sim.routers()) {
    const auto* engine = sim.engine(node);
    st.routers.push_back(RouterTables{sim.router_name(node), node, engine->table(), engine->compute_candidates()});
  }
  st.forwarding = sim.data_plane().tables;
  return st;
}

json to_json(const RunState& st) {
  json routers = json::array();
  for (const auto& r : st.routers) {
    json best = json::array();
    json all = json::array();
    for (const auto& e : r.best) best.push_back(entry_json(e));
    for (const auto& e : r.all) all.push_back(entry_json(e));
    routers.push_back({{"name", r.name}, {"node", r.node.value}, {"best", best}, {"all", all}});
  }
  json forwarding = json::array();
  for (const auto& [node, table] : st.forwarding) {
    json routes = json::array();
    for (const auto& r : table) {
      routes.push_back({{"prefix", r.prefix.to_string()},
                        {"next_hop", r.next_hop.to_string()},
                        {"ordinal", r.egress.ordinal},
                        {"metric", r.metric},
                        {"priority", r.priority}});
    }
    forwarding.push_back({{"node", node.value}, {"routes", routes}});
  }
  return {{"format", "msrsim-state-v1"},
          {"scenario", st.scenario_path},
          {"approach", msrouter::to_string(st.mode)},
          {"until_ms", st.until_ms},
          {"seed", st.seed},
          {"quiescent", st.quiescent},
          {"converged", st.converged},
          {"topology", net::TopologyCodec::encode(st.topology)},
          {"routers", routers},
          {"forwarding", forwarding}};
}

RunState state_from_json(const json& doc) {
  try {
    if (doc.at("format") != "msrsim-state-v1") throw Error(ErrorCode::InvariantViolation, "unknown state format");
    RunState st;
    st.scenario_path = doc.at("scenario").get<std::string>();
    st.mode = doc.at("approach") == "up" ? msrouter::OperatingMode::UpBased : msrouter::OperatingMode::CpBased;
    st.until_ms = doc.at("until_ms").get<SimTime>();
    st.seed = doc.at("seed").get<std::uint64_t>();
    st.quiescent = doc.at("quiescent").get<bool>();
    st.converged = doc.at("converged").get<bool>();
    st.topology = net::TopologyCodec::decode(doc.at("topology"));
    for (const auto& r : doc.at("routers")) {
      net::NodeId node{r.at("node").get<std::uint32_t>()};
      RouterTables tables{r.at("name").get<std::string>(), node, {}, {}};
      for (const auto& e : r.at("best")) tables.best.push_back(entry_from(e, node));
      for (const auto& e : r.at("all")) tables.all.push_back(entry_from(e, node));
      st.routers.push_back(std::move(tables));
    }
    for (const auto& f : doc.at("forwarding")) {
      net::NodeId node{f.at("node").get<std::uint32_t>()};
      auto& table = st.forwarding[node];
      for (const auto& r : f.at("routes")) {
        table.push_back(fwd::Route{parse_prefix(r.at("prefix")), parse_address(r.at("next_hop")),
                                   net::InterfaceId{node, r.at("ordinal").get<std::uint32_t>()},
                                   r.at("metric").get<Metric>(), r.at("priority").get<std::uint8_t>()});
      }
    }
    return st;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvariantViolation, std::string("malformed state file: ") + e.what());
  }
}

void save_state(const std::string& path, const RunState& state) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvariantViolation, "cannot write state file " + path);
  out << to_json(state).dump(1) << '\n';
}

std::optional<RunState> load_state(const std::string& path) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  std::ifstream in(path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvariantViolation, "state file " + path + " is not JSON: " + e.what());
  }
  return state_from_json(doc);
}

std::string routes_text(const RunState& state, std::string_view router, bool all) {
  auto it = std::find_if(state.routers.begin(), state.routers.end(),
                         [&](const RouterTables& r) { return r.name == router; });
  if (it == state.routers.end()) {
    for (auto r = state.routers.begin(); r != state.routers.end(); ++r) {
      if (state.topology.node(r->node).name == router) it = r;
    }
  }
  if (it == state.routers.end()) throw Error(ErrorCode::UnknownRouter, std::string(router));
  auto namer = [&](const net::InterfaceId& id) {
    const auto* i = state.topology.find_interface(id);
    return i ? i->name : std::to_string(id.ordinal);
  };
  auto hosts = host_labels(state.topology);
  auto rows = msrouter::make_dump_rows(all ? it->all : it->best, namer, hosts);
  return msrouter::render_routing_table(rows);
}

std::string trace_text(const RunState& state, std::string_view src, std::string_view dst) {
  auto locate = [&](std::string_view text) {
    auto addr = net::IpAddress::parse(text);
    if (!addr) throw Error(ErrorCode::UnknownAddress, std::string(text));
    auto iface = state.topology.find_interface_by_address(*addr);
    if (!iface) throw Error(ErrorCode::UnknownAddress, std::string(text));
    return std::make_pair(*addr, iface->node);
  };
  auto [src_addr, src_node] = locate(src);
  auto [dst_addr, dst_node] = locate(dst);
  (void)dst_node;
  fwd::DataPlane plane{state.topology, state.forwarding};
  auto record = fwd::forward_packet(plane, src_node, fwd::Packet{src_addr, dst_addr, fwd::kDefaultTtl, "trace"});
  return fwd::trace_report(state.topology, record);
}

int cmd_run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  auto ex = execute(config, err);
  if (ex.code != kExitOk) return ex.code;
  const auto& sim = *ex.sim;
  out << sim.log().render(config.output);
  bool converged = sim.converged();
  auto violations = sim.audit();
  for (const auto& v : violations) err << "invariant violated: " << v << '\n';
  if (config.output == OutputMode::Machine) {
    out << "t=" << sim.now() << " kind=status quiescent=" << ex.stats.quiescent << " converged=" << converged
        << " violations=" << violations.size() << " events=" << ex.stats.processed << '\n';
  } else {
    out << "status: " << (ex.stats.quiescent ? "quiescent" : "not quiescent") << ", "
        << (converged ? "converged" : "not converged") << ", " << violations.size()
        << " invariant violations at t=" << sim.now() << " (" << ex.stats.processed << " events)\n";
  }
  try {
    save_state(config.state_path, capture(sim, config, ex.stats.quiescent));
  } catch (const Error& e) {
    return report_error(e, err);
  }
  return ex.stats.quiescent && converged && violations.empty() ? kExitOk : kExitInvariant;
}

int cmd_routes(const CliConfig& config, std::string_view router, bool all, std::ostream& out, std::ostream& err) {
  try {
    int code = kExitOk;
    auto state = obtain_state(config, err, code);
    if (code != kExitOk) return code;
    if (!state) {
      out << msrouter::render_routing_table({});
      err << "note: no completed run (state file " << config.state_path << " not found); table is empty\n";
      return kExitOk;
    }
    out << routes_text(*state, router, all);
    return kExitOk;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int cmd_trace(const CliConfig& config, std::string_view src, std::string_view dst, std::ostream& out,
              std::ostream& err) {
  try {
    int code = kExitOk;
    auto state = obtain_state(config, err, code);
    if (code != kExitOk) return code;
    if (!state) {
      err << "error: no completed run (state file " << config.state_path << " not found); addresses are unknown\n";
      return kExitUnknown;
    }
    out << trace_text(*state, src, dst);
    return kExitOk;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mobile-system router simulator"};
  app.require_subcommand(1);
  CliConfig config;
  std::string approach;
  std::string output = "human";
  std::uint64_t seed = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--scenario", config.scenario_path, "Scenario file");
    sub->add_option("--approach", approach, "Where the routing protocol runs: cp (SMF) or up (UPF)")
        ->check(CLI::IsMember({"cp", "up"}));
    sub->add_option("--until", config.until_ms, "Simulated end time in ms")->capture_default_str();
    sub->add_option("--seed", seed, "Seed for optional randomness (default: the scenario's)");
    sub->add_option("--output", output, "human or machine")->check(CLI::IsMember({"human", "machine"}));
    sub->add_option("--state", config.state_path, "State file written by run")->capture_default_str();
  };

  auto* run = app.add_subcommand("run", "Run a scenario and persist its final state");
  common(run);
  run->get_option("--scenario")->required();
  run->get_option("--approach")->required();

  std::string router;
  bool all = false;
  auto* routes = app.add_subcommand("routes", "Print a router's routing table");
  common(routes);
  routes->add_option("--router", router, "msr<k>, a UPF name or an external router name")->required();
  routes->add_flag("--all", all, "Every candidate route, not just the best per destination");
  routes->add_flag("--inline", config.inline_run, "Run the scenario instead of reading the state file");

  std::string src;
  std::string dst;
  auto* trace = app.add_subcommand("trace", "Trace a packet between two addresses");
  common(trace);
  trace->add_option("--src", src, "Source address")->required();
  trace->add_option("--dst", dst, "Destination address")->required();
  trace->add_flag("--inline", config.inline_run, "Run the scenario instead of reading the state file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }
  if (!approach.empty()) {
    config.approach = approach == "up" ? msrouter::OperatingMode::UpBased : msrouter::OperatingMode::CpBased;
  }
  if (run->count("--seed") > 0 || routes->count("--seed") > 0 || trace->count("--seed") > 0) {
    config.seed = seed;
  }
  config.output = output == "machine" ? OutputMode::Machine : OutputMode::Human;
  if (config.inline_run && config.scenario_path.empty()) {
    err << "error: --inline needs --scenario\n";
    return kExitParse;
  }

  if (*run) return cmd_run(config, out, err);
  if (*routes) return cmd_routes(config, router, all, out, err);
  return cmd_trace(config, src, dst, out, err);
}

}  // namespace msrsim::cli
