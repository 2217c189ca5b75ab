#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "msrsim/cli/cli.hpp"
#include "msrsim/msrouter/table_dump.hpp"

using namespace msrsim;
using namespace msrsim::cli;
using msrsim::testing::fig2_path;

namespace {

struct TempState {
  TempState() {
    static int counter = 0;
    path = (std::filesystem::temp_directory_path() /
            ("msrsim-unit-" + std::to_string(::getpid()) + "-" + std::to_string(++counter) + ".json"))
               .string();
    std::filesystem::remove(path);
  }
  ~TempState() { std::filesystem::remove(path); }
  std::string path;
};

CliConfig fig2_config(const std::string& state, msrouter::OperatingMode mode = msrouter::OperatingMode::CpBased) {
  CliConfig c;
  c.scenario_path = fig2_path();
  c.approach = mode;
  c.state_path = state;
  return c;
}

int invoke(std::vector<std::string> args, std::string& out, std::string& err) {
  args.insert(args.begin(), "msrsim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  int code = main(static_cast<int>(argv.size()), argv.data(), o, e);
  out = o.str();
  err = e.str();
  return code;
}

}  // namespace

TEST_CASE("run persists a state that routes and trace read back") {
  TempState tmp;
  auto config = fig2_config(tmp.path);
  config.output = OutputMode::Machine;
  std::ostringstream out, err;
  CHECK(cmd_run(config, out, err) == kExitOk);
  CHECK(err.str().empty());
  CHECK(out.str().find("kind=status quiescent=1 converged=1 violations=0") != std::string::npos);
  REQUIRE(std::filesystem::exists(tmp.path));

  auto state = load_state(tmp.path);
  REQUIRE(state);
  CHECK(state->quiescent);
  CHECK(state->converged);
  CHECK(state->until_ms == 10000);
  CHECK(state->seed == 1);
  auto again = state_from_json(to_json(*state));
  CHECK(to_json(again) == to_json(*state));

  std::ostringstream routes, rerr;
  CHECK(cmd_routes(config, "msr1", true, routes, rerr) == kExitOk);
  auto rows = msrouter::parse_routing_table(routes.str());
  CHECK(std::count(rows.begin(), rows.end(), msrouter::DumpRow{"172.16.9.1/32 (host1)", "172.16.6.1", "pdu-1", 68}) ==
        1);

  std::ostringstream trace, terr;
  CHECK(cmd_trace(config, "172.16.1.1", "172.16.9.1", trace, terr) == kExitOk);
  CHECK(trace.str().find("trace-v1 result=delivered") != std::string::npos);
}

TEST_CASE("unknown names map to exit code 4") {
  TempState tmp;
  auto config = fig2_config(tmp.path);
  std::ostringstream out, err;
  REQUIRE(cmd_run(config, out, err) == kExitOk);

  std::ostringstream o1, e1;
  CHECK(cmd_routes(config, "msr9", false, o1, e1) == kExitUnknown);
  CHECK(e1.str() == "error: UnknownRouter: msr9\n");
  std::ostringstream o2, e2;
  CHECK(cmd_trace(config, "192.0.2.1", "172.16.9.1", o2, e2) == kExitUnknown);
  CHECK(e2.str().find("UnknownAddress") != std::string::npos);
  std::ostringstream o3, e3;
  CHECK(cmd_trace(config, "not-an-ip", "172.16.9.1", o3, e3) == kExitUnknown);
}

TEST_CASE("routes without a prior run print an empty table") {
  TempState tmp;
  auto config = fig2_config(tmp.path);
  std::ostringstream out, err;
  CHECK(cmd_routes(config, "msr1", false, out, err) == kExitOk);
  CHECK(msrouter::parse_routing_table(out.str()).empty());
  CHECK(out.str().starts_with("Destination"));
  CHECK(err.str().find("note:") != std::string::npos);

  std::ostringstream tout, terr;
  CHECK(cmd_trace(config, "172.16.1.1", "172.16.9.1", tout, terr) == kExitUnknown);
}

TEST_CASE("a corrupt state file is an invariant failure") {
  TempState tmp;
  {
    std::ofstream f(tmp.path);
    f << "{ not json";
  }
  auto config = fig2_config(tmp.path);
  std::ostringstream out, err;
  CHECK(cmd_routes(config, "msr1", false, out, err) == kExitInvariant);
}

TEST_CASE("command-line parsing and scenario errors exit 2") {
  TempState tmp;
  std::string out, err;
  CHECK(invoke({"run", "--scenario", fig2_path()}, out, err) == kExitParse);
  CHECK(invoke({"run", "--scenario", fig2_path(), "--approach", "sideways"}, out, err) == kExitParse);
  CHECK(invoke({"frobnicate"}, out, err) == kExitParse);
  CHECK(invoke({"run", "--scenario", "/nonexistent.scn", "--approach", "cp", "--state", tmp.path}, out, err) ==
        kExitParse);
  CHECK(invoke({"run", "--scenario", msrsim::testing::source_path("tests/cli/malformed.scn"), "--approach", "cp",
                "--state", tmp.path},
               out, err) == kExitParse);
  CHECK(err.find("MetricOutOfRange") != std::string::npos);
  CHECK(err.find("SyntaxError") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(tmp.path));
  CHECK(invoke({"routes", "--router", "msr1", "--inline"}, out, err) == kExitParse);
  CHECK(invoke({"--help"}, out, err) == kExitOk);
}

TEST_CASE("both approaches dump the same tables") {
  std::string cp_out, up_out, err;
  REQUIRE(invoke({"routes", "--router", "msr1", "--all", "--inline", "--scenario", fig2_path(), "--approach", "cp"},
                 cp_out, err) == kExitOk);
  REQUIRE(invoke({"routes", "--router", "msr1", "--all", "--inline", "--scenario", fig2_path(), "--approach", "up"},
                 up_out, err) == kExitOk);
  CHECK(cp_out == up_out);
  CHECK_FALSE(msrouter::parse_routing_table(cp_out).empty());

  std::string by_name;
  REQUIRE(invoke({"routes", "--router", "upf1", "--all", "--inline", "--scenario", fig2_path(), "--approach", "up"},
                 by_name, err) == kExitOk);
  CHECK(by_name == up_out);
}

TEST_CASE("machine output is stable across runs") {
  TempState a, b;
  std::string out_a, out_b, err;
  CHECK(invoke({"run", "--scenario", fig2_path(), "--approach", "up", "--output", "machine", "--state", a.path}, out_a,
               err) == kExitOk);
  CHECK(invoke({"run", "--scenario", fig2_path(), "--approach", "up", "--output", "machine", "--state", b.path}, out_b,
               err) == kExitOk);
  CHECK(out_a == out_b);
  CHECK(out_a.starts_with("t=0 kind=run"));
  CHECK(msrsim::testing::read_file(a.path) == msrsim::testing::read_file(b.path));
}
