#include <set>
#include <tuple>

#include "doctest.h"
#include "fixtures.hpp"
#include "msrsim/errors.hpp"
#include "msrsim/lsp/wire.hpp"
#include "msrsim/sim/event_queue.hpp"
#include "msrsim/sim/simulation.hpp"

using namespace msrsim;
using namespace msrsim::sim;
using msrouter::OperatingMode;
using namespace msrsim::testing;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvariantViolation;
}

bool has_record(const Simulation& s, std::string_view kind, std::string_view label) {
  for (const auto& r : s.log().records()) {
    if (r.kind == kind && r.label == label) return true;
  }
  return false;
}

using FrameKey = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t, Bytes>;

// Hellos the UPFs put on the wire in [from, to], without timestamps.
std::multiset<FrameKey> upf_hellos(const Simulation& s, SimTime from, SimTime to) {
  std::multiset<FrameKey> out;
  for (const auto& f : s.wire_frames()) {
    if (f.time < from || f.time > to || !lsp::is_hello(f.bytes)) continue;
    if (s.topology().node(f.egress.node).kind != net::NodeKind::Upf) continue;
    out.emplace(f.egress.node.value, f.egress.ordinal, f.src.value(), f.bytes);
  }
  return out;
}

}  // namespace

TEST_CASE("event queue orders by time then scheduling order") {
  EventQueue q;
  q.schedule(20, EventKind::Timer, TimerFire{net::NodeId{1}});
  q.schedule(10, EventKind::Timer, TimerFire{net::NodeId{2}});
  q.schedule(20, EventKind::Timer, TimerFire{net::NodeId{3}});
  CHECK(q.size() == 3);
  CHECK(q.next_time() == 10);
  CHECK(std::get<TimerFire>(q.pop().payload).node.value == 2);
  CHECK(q.now() == 10);
  CHECK(std::get<TimerFire>(q.pop().payload).node.value == 1);
  CHECK(std::get<TimerFire>(q.pop().payload).node.value == 3);
  CHECK(q.empty());
  CHECK(code_of([&] { q.schedule(5, EventKind::Timer, TimerFire{}); }) == ErrorCode::TimeInPast);
  q.advance_to(100);
  q.advance_to(50);
  CHECK(q.now() == 100);
  CHECK(to_string(EventKind::CpUpDeliver) == "cp-up-deliver");
}

TEST_CASE("an empty scenario is trivially quiescent") {
  auto s = make_sim(parse_or_throw(""), OperatingMode::CpBased);
  auto stats = s->run_until(1000);
  CHECK(stats.processed == 0);
  CHECK(stats.quiescent);
  CHECK(stats.now == 1000);
  CHECK(s->converged());
  CHECK(s->audit().empty());
}

TEST_CASE("fig2 converges in both approaches") {
  for (auto mode : {OperatingMode::CpBased, OperatingMode::UpBased}) {
    auto s = run_sim(load_scenario(fig2_path()), mode);
    CHECK(s->quiescent());
    CHECK(s->converged());
    CHECK(s->audit().empty());
    auto upf1 = node_id(*s, "upf1");
    CHECK(s->resolve_router("msr1") == upf1);
    CHECK(s->resolve_router("dnr") == node_id(*s, "dnr"));
    CHECK_FALSE(s->resolve_router("host1"));
    CHECK(s->router_name(upf1) == "msr1");
    CHECK(s->mobile().installed_rules(upf1).size() == s->engine(upf1)->table().size());
  }
}

TEST_CASE("CP mode binds four distinct TEIDs on the two-N6, two-session UPF") {
  auto s = run_sim(load_scenario(fig2_path()), OperatingMode::CpBased, 100);
  auto tunnels = s->mobile().tunnels(node_id(*s, "upf1"));
  std::set<mobile::Teid> teids;
  std::set<net::InterfaceId> bound;
  for (const auto& t : tunnels) {
    teids.insert(t.teid);
    bound.insert(t.bound_interface);
  }
  CHECK(tunnels.size() == 4);
  CHECK(teids.size() == 4);
  CHECK(bound.size() == 4);
  CHECK(s->mobile().relay_table(node_id(*s, "upf1")).size() == 4);
  CHECK(s->mobile().tunnels(node_id(*s, "upf2")).size() == 2);
}

TEST_CASE("runs are deterministic for a seed, loss included") {
  SimConfig lossy;
  lossy.loss_rate = 0.1;
  auto a = run_sim(load_scenario(fig2_path()), OperatingMode::UpBased, 10000, lossy);
  auto b = run_sim(load_scenario(fig2_path()), OperatingMode::UpBased, 10000, lossy);
  CHECK(a->log().render(OutputMode::Machine) == b->log().render(OutputMode::Machine));
  CHECK(routing_snapshot(*a) == routing_snapshot(*b));
  CHECK(a->seed() == 1);

  lossy.seed = 99;
  auto c = make_sim(load_scenario(fig2_path()), OperatingMode::UpBased, lossy);
  CHECK(c->seed() == 99);
}

TEST_CASE("run_until reports only its own window") {
  auto s = make_sim(load_scenario(fig2_path()), OperatingMode::CpBased);
  auto first = s->run_until(5000);
  auto second = s->run_until(5000);
  CHECK(first.processed > 0);
  CHECK(second.processed == 0);
  CHECK(second.now == 5000);
  CHECK(code_of([&] { s->inject(4000, net::LinkDownAction{{"dnr", "1"}}); }) == ErrorCode::TimeInPast);
}

TEST_CASE("injected events must name existing targets") {
  auto s = make_sim(load_scenario(fig2_path()), OperatingMode::CpBased);
  CHECK(code_of([&] { s->inject(10, net::LinkDownAction{{"ghost", "1"}}); }) == ErrorCode::UnknownTarget);
  CHECK(code_of([&] { s->inject(10, net::LinkDownAction{{"dnr", "9"}}); }) == ErrorCode::UnknownTarget);
  CHECK(code_of([&] { s->inject(10, net::PduEstablishAction{{"ghost", "upf1", {}, {}, 1, 1}}); }) ==
        ErrorCode::UnknownTarget);
  s->inject(10, net::LinkDownAction{{"upf1", "pdu-1"}});
  s->inject(20, net::LinkDownAction{{"upf1", "pdu-9"}});  // resolved when it fires
  s->run_until(30);
  CHECK(has_record(*s, "event", "link-down"));
  CHECK(has_record(*s, "warn", "event-failed"));
}

TEST_CASE("link-up on an up link is a logged no-op") {
  auto s = make_sim(load_scenario(fig2_path()), OperatingMode::CpBased);
  s->inject(100, net::LinkUpAction{{"dnr", "1"}});
  s->run_until(200);
  CHECK(has_record(*s, "warn", "link-up-noop"));
}

TEST_CASE("a metric change moves the N6 exit") {
  auto scenario = load_scenario(fig2_path());
  auto s = make_sim(scenario, OperatingMode::CpBased);
  s->run_until(5000);
  auto upf1 = node_id(*s, "upf1");
  const auto* before = route_to(*s, upf1, prefix("172.16.1.0/24"));
  REQUIRE(before);
  CHECK(before->next_hop == ip("172.16.4.1"));
  CHECK(before->metric == 292);

  s->inject(5000, net::MetricChangeAction{{"upf1", "n6-2"}, 500, 500});
  s->run_until(8000);
  const auto* after = route_to(*s, upf1, prefix("172.16.1.0/24"));
  REQUIRE(after);
  CHECK(after->next_hop == ip("172.16.2.1"));
  CHECK(after->metric == 338);
  CHECK(has_record(*s, "event", "metric"));
  CHECK(s->converged());
}

TEST_CASE("the GTP relay is invisible on the wire") {
  SimConfig cfg;
  cfg.record_wire = true;
  auto cp = run_sim(load_scenario(fig2_path()), OperatingMode::CpBased, 10000, cfg);
  auto up = run_sim(load_scenario(fig2_path()), OperatingMode::UpBased, 10000, cfg);
  auto a = upf_hellos(*cp, 8500, 10000);
  auto b = upf_hellos(*up, 8500, 10000);
  CHECK_FALSE(a.empty());
  CHECK(a == b);
  for (const auto& [node, ord, src, bytes] : a) {
    const auto& iface = cp->topology().interface(net::InterfaceId{net::NodeId{node}, ord});
    CHECK(iface.address.value() == src);
  }
}

TEST_CASE("step logs follow the approach") {
  auto cp = run_sim(load_scenario(fig2_path()), OperatingMode::CpBased, 3000);
  auto up = run_sim(load_scenario(fig2_path()), OperatingMode::UpBased, 3000);
  std::set<std::string> cp_steps, up_steps;
  for (const auto& r : cp->log().records()) cp_steps.insert(r.step);
  for (const auto& r : up->log().records()) up_steps.insert(r.step);
  for (int i = 1; i <= 7; ++i) {
    CHECK(cp_steps.contains("A1.S" + std::to_string(i)));
    CHECK(up_steps.contains("A2.S" + std::to_string(i)));
  }
  CHECK_FALSE(cp_steps.contains("A2.S1"));
  CHECK_FALSE(up_steps.contains("A1.S1"));
}
