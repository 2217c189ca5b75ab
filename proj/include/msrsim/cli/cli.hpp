#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "msrsim/event_log.hpp"
#include "msrsim/fwd/forwarding.hpp"
#include "msrsim/lsp/messages.hpp"
#include "msrsim/msrouter/ms_router.hpp"
#include "msrsim/net/topology.hpp"

namespace msrsim::sim {
class Simulation;
}

namespace msrsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitInvariant = 3;
inline constexpr int kExitUnknown = 4;

inline constexpr SimTime kDefaultUntilMs = 10000;
inline constexpr std::string_view kDefaultStatePath = "msrsim-state.json";

struct CliConfig {
  std::string scenario_path;
  std::optional<msrouter::OperatingMode> approach;  // required by run and --inline
  SimTime until_ms = kDefaultUntilMs;
  std::optional<std::uint64_t> seed;  // scenario's seed when unset
  OutputMode output = OutputMode::Human;
  std::string state_path{kDefaultStatePath};
  bool inline_run = false;  // routes/trace: run the scenario instead of reading the state file
};

struct RouterTables {
  std::string name;
  net::NodeId node;
  std::vector<lsp::RoutingEntry> best;
  std::vector<lsp::RoutingEntry> all;
};

/// Final state of a run, as persisted for `routes` and `trace`.
struct RunState {
  std::string scenario_path;
  msrouter::OperatingMode mode = msrouter::OperatingMode::CpBased;
  SimTime until_ms = 0;
  std::uint64_t seed = 0;
  bool quiescent = false;
  bool converged = false;
  net::Topology topology;
  std::vector<RouterTables> routers;
  std::map<net::NodeId, fwd::ForwardingTable> forwarding;
};

RunState capture(const sim::Simulation& sim, const CliConfig& config, bool quiescent);
nlohmann::json to_json(const RunState& state);
/// Throws Error(InvariantViolation) on malformed documents.
RunState state_from_json(const nlohmann::json& doc);
void save_state(const std::string& path, const RunState& state);
/// nullopt when the file does not exist.
std::optional<RunState> load_state(const std::string& path);

/// Table-II style dump. Throws Error(UnknownRouter).
std::string routes_text(const RunState& state, std::string_view router, bool all);
/// Rendered trace between two addresses. Throws Error(UnknownAddress).
std::string trace_text(const RunState& state, std::string_view src, std::string_view dst);

int cmd_run(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_routes(const CliConfig& config, std::string_view router, bool all, std::ostream& out, std::ostream& err);
int cmd_trace(const CliConfig& config, std::string_view src, std::string_view dst, std::ostream& out,
              std::ostream& err);

/// Subcommand front end: `run`, `routes`, `trace`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace msrsim::cli
