#include "doctest.h"
#include "fixtures.hpp"
#include "msrsim/fwd/forwarding.hpp"

using namespace msrsim;
using namespace msrsim::fwd;
using msrsim::testing::ip;
using msrsim::testing::prefix;

namespace {

// h1 -- r1 -- r2 -- h2, r1's second link costs 3, r2 -> h2 costs 2.
struct Line {
  Line() {
    h1 = topo.add_node(net::NodeKind::Host, "h1");
    r1 = topo.add_node(net::NodeKind::ExternalRouter, "r1");
    r2 = topo.add_node(net::NodeKind::ExternalRouter, "r2");
    h2 = topo.add_node(net::NodeKind::Host, "h2");
    auto h1a = topo.add_interface(h1, 1, ip("10.1.0.9"), prefix("10.1.0.0/24"));
    r1a = topo.add_interface(r1, 1, ip("10.1.0.1"), prefix("10.1.0.0/24"));
    r1b = topo.add_interface(r1, 2, ip("10.12.0.1"), prefix("10.12.0.0/24"));
    r2a = topo.add_interface(r2, 1, ip("10.12.0.2"), prefix("10.12.0.0/24"));
    r2b = topo.add_interface(r2, 2, ip("10.2.0.1"), prefix("10.2.0.0/24"));
    auto h2a = topo.add_interface(h2, 1, ip("10.2.0.9"), prefix("10.2.0.0/24"));
    topo.add_link(h1a, r1a, 1, 1);
    mid = topo.add_link(r1b, r2a, 3, 3);
    topo.add_link(r2b, h2a, 2, 2);
  }

  DataPlane plane() const {
    DataPlane p{topo, {}};
    p.tables[h1] = host_table(topo, h1);
    p.tables[h2] = host_table(topo, h2);
    p.tables[r1] = {Route{prefix("10.2.0.0/24"), ip("10.12.0.2"), r1b, 5, 24}};
    p.tables[r2] = {Route{prefix("10.1.0.0/24"), ip("10.12.0.1"), r2a, 4, 24}};
    return p;
  }

  net::Topology topo;
  net::NodeId h1, r1, r2, h2;
  net::InterfaceId r1a, r1b, r2a, r2b;
  net::LinkId mid;
};

}  // namespace

TEST_CASE("lookup delivers own addresses and prefers connected peers") {
  Line l;
  CHECK(std::holds_alternative<Deliver>(lookup(l.topo, l.r1, {}, ip("10.12.0.1"))));
  auto peer = lookup(l.topo, l.r1, {}, ip("10.12.0.2"));
  REQUIRE(std::holds_alternative<Forward>(peer));
  CHECK(std::get<Forward>(peer).egress == l.r1b);
  CHECK(std::holds_alternative<NoRoute>(lookup(l.topo, l.r1, {}, ip("10.2.0.9"))));

  auto host = lookup(l.topo, l.h1, host_table(l.topo, l.h1), ip("192.0.2.1"));
  REQUIRE(std::holds_alternative<Forward>(host));
  CHECK(std::get<Forward>(host).next_hop == ip("10.1.0.1"));
}

TEST_CASE("longest prefix wins, then priority, metric and next hop") {
  Line l;
  ForwardingTable t{
      Route{prefix("10.0.0.0/8"), ip("10.12.0.2"), l.r1b, 1, 8},
      Route{prefix("10.2.0.0/16"), ip("10.1.0.9"), l.r1a, 9, 16},
  };
  CHECK(std::get<Forward>(lookup(l.topo, l.r1, t, ip("10.2.3.4"))).egress == l.r1a);
  CHECK(std::get<Forward>(lookup(l.topo, l.r1, t, ip("10.3.3.4"))).egress == l.r1b);

  ForwardingTable ties{
      Route{prefix("10.9.0.0/16"), ip("10.12.0.2"), l.r1b, 5, 16},
      Route{prefix("10.9.0.0/16"), ip("10.1.0.9"), l.r1a, 7, 16},
  };
  CHECK(std::get<Forward>(lookup(l.topo, l.r1, ties, ip("10.9.0.1"))).egress == l.r1b);
  ties[1].metric = 5;
  CHECK(std::get<Forward>(lookup(l.topo, l.r1, ties, ip("10.9.0.1"))).next_hop == ip("10.1.0.9"));
  ties[0].priority = 20;
  CHECK(std::get<Forward>(lookup(l.topo, l.r1, ties, ip("10.9.0.1"))).next_hop == ip("10.12.0.2"));
}

TEST_CASE("packets follow the tables to the destination") {
  Line l;
  auto rec = forward_packet(l.plane(), l.h1, Packet{ip("10.1.0.9"), ip("10.2.0.9"), kDefaultTtl, "t"});
  CHECK(rec.outcome == TraceOutcome::Delivered);
  CHECK(rec.path() == std::vector<net::NodeId>{l.h1, l.r1, l.r2, l.h2});
  CHECK(rec.total_metric == 1 + 3 + 2);
  CHECK(rec.packet.ttl == kDefaultTtl - 3);
  CHECK(trace_report(l.topo, rec) ==
        "0 h1 in=- out=eth1 cost=1\n"
        "1 r1 in=eth1 out=eth2 cost=3\n"
        "2 r2 in=eth1 out=eth2 cost=2\n"
        "3 h2 in=eth1 out=-\n"
        "trace-v1 result=delivered src=10.1.0.9 dst=10.2.0.9 hops=4 total_metric=6 tag=t\n");
}

TEST_CASE("a self trace is a single delivered hop") {
  Line l;
  auto rec = forward_packet(l.plane(), l.h1, Packet{ip("10.1.0.9"), ip("10.1.0.9"), kDefaultTtl, ""});
  CHECK(rec.outcome == TraceOutcome::Delivered);
  CHECK(rec.hops.size() == 1);
  CHECK(rec.total_metric == 0);
  CHECK(trace_report(l.topo, rec).ends_with("hops=1 total_metric=0 tag=-\n"));
}

TEST_CASE("missing routes, down links and loops end the trace") {
  Line l;
  auto plane = l.plane();
  auto none = forward_packet(plane, l.h1, Packet{ip("10.1.0.9"), ip("10.77.0.1"), kDefaultTtl, ""});
  CHECK(none.outcome == TraceOutcome::NoRoute);
  CHECK(none.failed_at == l.r1);
  CHECK(trace_report(l.topo, none).find("result=no-route") != std::string::npos);
  CHECK(trace_report(l.topo, none).ends_with(" at=r1\n"));

  plane.topology.set_link_state(l.mid, net::LinkState::Down);
  auto down = forward_packet(plane, l.h1, Packet{ip("10.1.0.9"), ip("10.2.0.9"), kDefaultTtl, ""});
  CHECK(down.outcome == TraceOutcome::LinkDown);
  CHECK(down.failed_link == l.mid);
  CHECK(trace_report(plane.topology, down).ends_with(" link=r1.eth2~r2.eth1\n"));

  auto loop = l.plane();
  loop.tables[l.r2].push_back(Route{prefix("10.66.0.0/16"), ip("10.12.0.1"), l.r2a, 1, 16});
  loop.tables[l.r1].push_back(Route{prefix("10.66.0.0/16"), ip("10.12.0.2"), l.r1b, 1, 16});
  auto ttl = forward_packet(loop, l.h1, Packet{ip("10.1.0.9"), ip("10.66.0.1"), 8, ""});
  CHECK(ttl.outcome == TraceOutcome::TtlExceeded);
  CHECK(ttl.hops.size() == 8);
}
