#include "doctest.h"
#include "fixtures.hpp"
#include "msrsim/errors.hpp"
#include "msrsim/msrouter/ms_router.hpp"
#include "msrsim/msrouter/table_dump.hpp"

using namespace msrsim;
using namespace msrsim::msrouter;
using msrsim::testing::ip;
using msrsim::testing::prefix;

namespace {

net::InterfaceId upf_port(std::uint32_t ord) { return net::InterfaceId{net::NodeId{1}, ord}; }

UpfAttachments sample() {
  UpfAttachments a;
  a.n6 = {N6Attachment{upf_port(2), ip("172.16.4.2"), prefix("172.16.4.0/24")},
          N6Attachment{upf_port(1), ip("172.16.2.2"), prefix("172.16.2.0/24")}};
  a.sessions = {SessionAttachment{7, upf_port(4), ip("172.16.7.2"), prefix("172.16.7.0/24")},
                SessionAttachment{1, upf_port(3), ip("172.16.6.2"), prefix("172.16.6.0/24")}};
  return a;
}

}  // namespace

TEST_CASE("interfaces list N6 by ordinal, then sessions by id") {
  auto list = enumerate_interfaces(sample());
  REQUIRE(list.size() == 4);
  CHECK(list[0].name == "n6-1");
  CHECK(list[1].name == "n6-2");
  CHECK(list[2].name == "pdu-1");
  CHECK(list[2].address == ip("172.16.6.2"));
  CHECK(list[3].name == "pdu-7");
  CHECK(list[3].kind == MsrInterfaceKind::PduSession);
  CHECK(map_interface_name(MsrInterfaceKind::N6, 3) == "n6-3");
}

TEST_CASE("router id is the highest N6 address") {
  MsRouter r(net::NodeId{1}, OperatingMode::CpBased, sample().n6);
  CHECK(r.router_id() == lsp::RouterId::from_address(ip("172.16.4.2")));
  MsRouter bare(net::NodeId{1}, OperatingMode::UpBased, {}, {}, ip("0.0.0.3"));
  CHECK(bare.router_id().to_string() == "0.0.0.3");

  r.attach_session(SessionAttachment{2, upf_port(3), ip("10.0.0.2"), prefix("10.0.0.0/24")});
  CHECK(r.find_interface("pdu-2"));
  CHECK(r.find_interface(upf_port(3))->name == "pdu-2");
  r.detach_session(2);
  CHECK_FALSE(r.find_interface("pdu-2"));
  CHECK(r.interfaces().size() == 2);
}

TEST_CASE("session addresses come from the UE subnet") {
  std::set<net::IpAddress> used;
  CHECK(reserve_pdu_iface_address(ip("172.16.6.1"), prefix("172.16.6.0/24"), used) == ip("172.16.6.2"));
  CHECK(reserve_pdu_iface_address(ip("172.16.6.10"), prefix("172.16.6.0/24"), used) == ip("172.16.6.1"));
  CHECK(reserve_pdu_iface_address(ip("172.16.6.10"), prefix("172.16.6.0/24"), used) == ip("172.16.6.3"));
  CHECK(used.size() == 3);

  std::set<net::IpAddress> tight{ip("10.0.0.2")};
  try {
    reserve_pdu_iface_address(ip("10.0.0.1"), prefix("10.0.0.0/30"), tight);
    FAIL("expected SubnetExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SubnetExhausted);
  }
}

TEST_CASE("translation keeps one rule per destination") {
  auto ifaces = enumerate_interfaces(sample());
  std::vector<lsp::RoutingEntry> table{
      {prefix("172.16.9.0/24"), ip("172.16.7.1"), upf_port(4), 258},
      {prefix("172.16.9.0/24"), ip("172.16.6.1"), upf_port(3), 68},
      {prefix("172.16.1.0/24"), ip("172.16.4.1"), upf_port(2), 292},
      {prefix("10.0.0.0/8"), ip("10.0.0.1"), upf_port(9), 5},
  };
  auto out = translate_routes(table, ifaces);
  REQUIRE(out.rules.size() == 2);
  CHECK(out.rules[0].match_prefix == prefix("172.16.1.0/24"));
  CHECK(out.rules[0].priority == 24);
  CHECK(out.rules[1].next_hop == ip("172.16.6.1"));
  CHECK(out.rules[1].egress == upf_port(3));
  REQUIRE(out.diagnostics.size() == 1);
  CHECK(out.diagnostics[0].find("10.0.0.0/8") != std::string::npos);
  CHECK(translate_routes({}, ifaces).rules.empty());
}

TEST_CASE("routing table dump renders and parses back") {
  std::vector<lsp::RoutingEntry> table{
      {prefix("172.16.9.0/24"), ip("172.16.7.1"), upf_port(4), 258},
      {prefix("172.16.9.0/24"), ip("172.16.6.1"), upf_port(3), 68},
      {prefix("172.16.1.0/24"), ip("172.16.4.1"), upf_port(2), 292},
  };
  auto namer = [](const net::InterfaceId& id) { return id.ordinal == 2 ? "n6-2" : "pdu-" + std::to_string(id.ordinal); };
  std::vector<HostLabel> hosts{{ip("172.16.9.1"), prefix("172.16.9.0/24"), "host1"}};
  auto rows = make_dump_rows(table, namer, hosts);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == DumpRow{"172.16.1.0/24", "172.16.4.1", "n6-2", 292});
  CHECK(rows[1] == DumpRow{"172.16.9.0/24", "172.16.6.1", "pdu-3", 68});
  CHECK(rows[3] == DumpRow{"172.16.9.1/32 (host1)", "172.16.6.1", "pdu-3", 68});
  CHECK(rows[4] == DumpRow{"172.16.9.1/32 (host1)", "172.16.7.1", "pdu-4", 258});

  auto text = render_routing_table(rows);
  CHECK(text.starts_with("Destination"));
  CHECK(text.find("Next Hop") != std::string::npos);
  CHECK(text.find("Destination interface") != std::string::npos);
  CHECK(parse_routing_table(text) == rows);
  CHECK(parse_routing_table(render_routing_table({})).empty());
}
