#include "msrsim/sim/simulation.hpp"

#include <algorithm>
#include <numeric>

#include "msrsim/errors.hpp"
#include "msrsim/lsp/step_log.hpp"
#include "msrsim/lsp/wire.hpp"

namespace msrsim::sim {

namespace {

EventKind kind_of(const net::ScriptedAction& action) {
  switch (action.index()) {
    case 0: return EventKind::LinkDown;
    case 1: return EventKind::LinkUp;
    case 2: return EventKind::MetricChange;
    case 3: return EventKind::PduEstablish;
    default: return EventKind::PduRelease;
  }
}

}  // namespace

Simulation::Simulation(const net::Scenario& scenario, SimConfig config)
    : config_(config), seed_(config.seed.value_or(scenario.seed)), rng_(seed_) {
  build(scenario);
}

Simulation::~Simulation() = default;

void Simulation::build(const net::Scenario& scenario) {
  log_.append(LogRecord{0, "run", "sim", {}, "start", {}}
                  .with("mode", std::string(msrouter::to_string(config_.mode)))
                  .with("seed", std::to_string(seed_)));
  for (const auto& n : scenario.nodes) topology_.add_node(n.kind, n.name);
  mobile::Outbox& outbox = *this;
  mobile_ = std::make_unique<mobile::MobileSystem>(topology_, outbox, config_.mode, config_.timers);

  for (const auto& i : scenario.interfaces) {
    net::NodeId node = *topology_.find_node(i.node);
    if (topology_.node(node).kind == net::NodeKind::Upf) {
      mobile_->attach_n6(node, i.ordinal, i.address, i.subnet);
    } else {
      topology_.add_interface(node, i.ordinal, i.address, i.subnet);
    }
  }
  mobile_->finalize();
  for (const auto& l : scenario.links) {
    topology_.add_link(resolve_port(l.a), resolve_port(l.b), l.metric_ab, l.metric_ba);
  }
  for (const auto& p : scenario.pdus) {
    mobile_->establish_pdu_session(mobile::SessionRequest{*topology_.find_node(p.ue), *topology_.find_node(p.upf),
                                                          p.ue_address, p.ue_subnet, p.ue_to_upf, p.upf_to_ue},
                                   0);
  }

  for (const auto& node : topology_.nodes()) {
    if (!net::is_external_router(node.kind)) continue;
    net::IpAddress id{0x00010000u + node.id.value};  // fallback for routers without addresses yet
    if (!node.interfaces.empty()) {
      id = std::max_element(node.interfaces.begin(), node.interfaces.end(), [](const auto& a, const auto& b) {
             return a.address < b.address;
           })->address;
    }
    engines_.emplace(node.id, lsp::LinkStateRouter(lsp::RouterId::from_address(id), config_.timers));
    sync_external(node.id);
  }

  mobile_->start(0);
  for (auto& [node, engine] : engines_) {
    handle_external(node, engine.start(0));
    queue_.schedule(config_.timers.hello_interval_ms, EventKind::Timer, TimerFire{node});
  }
  for (const auto& ev : scenario.events) inject(ev.time, ev.action);
}

net::InterfaceId Simulation::resolve_port(const net::PortRef& port) const {
  auto node = topology_.find_node(port.node);
  if (!node) throw Error(ErrorCode::UnknownTarget, "unknown node " + port.node);
  if (auto sid = net::port_session(port.port)) {
    const auto* s = mobile_->find_session(*sid);
    if (s != nullptr && s->state == mobile::SessionState::Active) {
      if (s->upf == *node) return s->upf_iface;
      if (s->ue == *node) return s->ue_iface;
    }
    throw Error(ErrorCode::UnknownTarget, "no active session port " + port.to_string());
  }
  if (auto ord = net::port_ordinal(port.port)) {
    net::InterfaceId id{*node, *ord};
    if (topology_.find_interface(id) != nullptr) return id;
  }
  if (const auto* i = topology_.find_interface_by_name(*node, port.port)) return i->id;
  throw Error(ErrorCode::UnknownTarget, "unknown port " + port.to_string());
}

void Simulation::validate_action(const net::ScriptedAction& action) const {
  auto need_node = [&](const std::string& name) {
    if (!topology_.find_node(name)) throw Error(ErrorCode::UnknownTarget, "unknown node " + name);
  };
  std::visit(
      [&](const auto& a) {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, net::PduEstablishAction>) {
          need_node(a.session.ue);
          need_node(a.session.upf);
        } else if constexpr (!std::is_same_v<A, net::PduReleaseAction>) {
          need_node(a.port.node);
          // Session ports may refer to sessions created later; others must exist now.
          if (!net::port_session(a.port.port)) resolve_port(a.port);
        }
      },
      action);
}

void Simulation::inject(SimTime t, const net::ScriptedAction& action) {
  validate_action(action);
  queue_.schedule(t, kind_of(action), action);
}

RunStats Simulation::run_until(SimTime t) {
  RunStats stats;
  while (auto next = queue_.next_time()) {
    if (*next > t) break;
    Event ev = queue_.pop();
    ++stats.counts[ev.kind];
    ++stats.processed;
    dispatch(ev);
  }
  queue_.advance_to(t);
  stats.now = queue_.now();
  stats.quiescent = quiescent();
  return stats;
}

void Simulation::dispatch(const Event& ev) {
  SimTime now = queue_.now();
  if (const auto* d = std::get_if<WireDelivery>(&ev.payload)) {
    deliver_wire(*d);
  } else if (const auto* t = std::get_if<TimerFire>(&ev.payload)) {
    if (topology_.node(t->node).kind == net::NodeKind::Upf) {
      mobile_->on_router_timer(t->node, now);
    } else if (auto it = engines_.find(t->node); it != engines_.end()) {
      handle_external(t->node, it->second.tick(now));
      queue_.schedule(now + config_.timers.hello_interval_ms, EventKind::Timer, TimerFire{t->node});
    }
  } else if (const auto* c = std::get_if<ChannelDelivery>(&ev.payload)) {
    mobile_->on_channel_receive(c->from, c->to, c->payload, now);
  } else {
    const auto& action = std::get<net::ScriptedAction>(ev.payload);
    try {
      run_action(action);
    } catch (const Error& e) {
      log_.append(LogRecord{now, "warn", "sim", {}, "event-failed", {}}
                      .with("event", std::string(net::action_name(action)))
                      .with("code", std::string(to_string(e.code())))
                      .with("detail", e.what()));
    }
  }
}

void Simulation::run_action(const net::ScriptedAction& action) {
  SimTime now = queue_.now();
  auto event_record = [&](std::string label) { return LogRecord{now, "event", "sim", {}, std::move(label), {}}; };
  auto link_of = [&](const net::PortRef& port) {
    auto iface = resolve_port(port);
    auto link = topology_.link_on(iface);
    if (!link) throw Error(ErrorCode::UnknownTarget, port.to_string() + " has no link");
    return std::make_pair(iface, *link);
  };
  auto describe_link = [&](net::LinkId id) {
    const auto& l = topology_.link(id);
    return topology_.describe(l.a) + "~" + topology_.describe(l.b);
  };

  if (const auto* down = std::get_if<net::LinkDownAction>(&action)) {
    auto [iface, link] = link_of(down->port);
    if (!topology_.link(link).up()) {
      log_.append(event_record("link-down").with("link", describe_link(link)).with("note", "already-down"));
      return;
    }
    topology_.set_link_state(link, net::LinkState::Down);
    log_.append(event_record("link-down").with("link", describe_link(link)));
  } else if (const auto* up = std::get_if<net::LinkUpAction>(&action)) {
    auto [iface, link] = link_of(up->port);
    if (topology_.link(link).up()) {
      log_.append(LogRecord{now, "warn", "sim", {}, "link-up-noop", {}}.with("link", describe_link(link)));
      return;
    }
    topology_.set_link_state(link, net::LinkState::Up);
    log_.append(event_record("link-up").with("link", describe_link(link)));
  } else if (const auto* m = std::get_if<net::MetricChangeAction>(&action)) {
    auto [iface, link] = link_of(m->port);
    const auto& l = topology_.link(link);
    if (l.a == iface) {
      topology_.set_link_metrics(link, m->metric_out, m->metric_in);
    } else {
      topology_.set_link_metrics(link, m->metric_in, m->metric_out);
    }
    log_.append(event_record("metric")
                    .with("link", describe_link(link))
                    .with("out", std::to_string(m->metric_out))
                    .with("in", std::to_string(m->metric_in)));
    auto a = topology_.link(link).a.node;
    auto b = topology_.link(link).b.node;
    refresh_router(a);
    refresh_router(b);
  } else if (const auto* est = std::get_if<net::PduEstablishAction>(&action)) {
    const auto& p = est->session;
    auto ue = topology_.find_node(p.ue);
    auto upf = topology_.find_node(p.upf);
    if (!ue || !upf) throw Error(ErrorCode::UnknownTarget, "pdu-establish " + p.ue + " " + p.upf);
    log_.append(event_record("pdu-establish").with("ue", p.ue).with("upf", p.upf));
    mobile_->establish_pdu_session(
        mobile::SessionRequest{*ue, *upf, p.ue_address, p.ue_subnet, p.ue_to_upf, p.upf_to_ue}, now);
  } else if (const auto* rel = std::get_if<net::PduReleaseAction>(&action)) {
    log_.append(event_record("pdu-release").with("session", std::to_string(rel->session_id)));
    mobile_->release_pdu_session(rel->session_id, now);
  }
}

void Simulation::refresh_router(net::NodeId node) {
  if (topology_.node(node).kind == net::NodeKind::Upf) {
    mobile_->refresh_interfaces(node, queue_.now());
    return;
  }
  auto it = engines_.find(node);
  if (it == engines_.end()) return;
  sync_external(node);
  handle_external(node, it->second.interfaces_changed(queue_.now()));
}

void Simulation::sync_external(net::NodeId node) {
  auto& engine = engines_.at(node);
  const auto& n = topology_.node(node);
  std::vector<net::InterfaceId> stale;
  for (const auto& ri : engine.interfaces()) {
    if (n.find_interface(ri.id.ordinal) == nullptr) stale.push_back(ri.id);
  }
  for (const auto& id : stale) engine.remove_interface(id);
  for (const auto& i : n.interfaces) {
    lsp::RouterInterface ri{i.id, i.address, i.subnet, 0, false, i.admin_state == net::AdminState::Up};
    if (auto link = topology_.link_on(i.id)) {
      ri.linked = true;
      ri.cost = topology_.link(*link).metric_from(i.id);
    }
    const auto* existing = engine.find_interface(i.id);
    bool going_down = existing != nullptr && existing->up && !ri.up;
    engine.add_interface(ri);
    if (going_down) engine.set_interface_up(i.id, false);
  }
}

void Simulation::handle_external(net::NodeId node, const lsp::StepResult& step) {
  const auto& engine = engines_.at(node);
  auto labeler = [&](const net::InterfaceId& id) {
    const auto* i = topology_.find_interface(id);
    return i ? i->name : std::to_string(id.ordinal);
  };
  for (auto& rec : lsp::describe_step(engine, step, queue_.now(), topology_.node(node).name, labeler)) {
    log_.append(std::move(rec));
  }
  for (const auto& e : step.emissions) {
    const auto* i = topology_.find_interface(e.iface);
    if (i == nullptr) continue;
    send_on_wire(e.iface, i->address, lsp::encode(e.message));
  }
}

void Simulation::send_on_wire(const net::InterfaceId& egress, net::IpAddress src, Bytes bytes) {
  if (config_.record_wire) wire_.push_back(WireFrame{queue_.now(), egress, src, bytes});
  auto link = topology_.link_on(egress);
  if (!link || !topology_.link(*link).up()) return;
  if (config_.loss_rate > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < config_.loss_rate) return;
  auto ingress = topology_.link(*link).peer_of(egress);
  queue_.schedule(queue_.now() + config_.link_latency_ms, EventKind::DeliverMsg,
                  WireDelivery{ingress, src, std::move(bytes), *link});
}

void Simulation::deliver_wire(const WireDelivery& d) {
  auto link = topology_.link_on(d.ingress);
  if (!link || *link != d.link || !topology_.link(*link).up()) return;
  SimTime now = queue_.now();
  if (topology_.node(d.ingress.node).kind == net::NodeKind::Upf) {
    mobile_->on_wire_receive(d.ingress, d.src, d.bytes, now);
    return;
  }
  auto it = engines_.find(d.ingress.node);
  if (it == engines_.end()) return;
  auto msg = lsp::decode(d.bytes);
  if (!msg) return;
  handle_external(d.ingress.node, it->second.receive(d.ingress, *msg, now));
}

void Simulation::send_channel(net::NodeId from, net::NodeId to, mobile::ChannelPayload payload) {
  queue_.schedule(queue_.now() + config_.channel_latency_ms, EventKind::CpUpDeliver,
                  ChannelDelivery{from, to, std::move(payload)});
}

void Simulation::schedule_router_timer(net::NodeId upf, SimTime at) {
  queue_.schedule(at, EventKind::Timer, TimerFire{upf});
}

void Simulation::external_interfaces_changed(net::NodeId node, SimTime) { refresh_router(node); }

void Simulation::log(LogRecord rec) { log_.append(std::move(rec)); }

const lsp::LinkStateRouter* Simulation::engine(net::NodeId node) const {
  if (auto it = engines_.find(node); it != engines_.end()) return &it->second;
  if (const auto* r = mobile_->find_router(node)) return &r->engine();
  return nullptr;
}

std::optional<net::NodeId> Simulation::resolve_router(std::string_view name) const {
  for (auto upf : mobile_->upfs()) {
    if (mobile_->router_name(upf) == name) return upf;
  }
  auto node = topology_.find_node(name);
  if (node && engine(*node) != nullptr) return node;
  return std::nullopt;
}

std::string Simulation::router_name(net::NodeId node) const {
  if (topology_.node(node).kind == net::NodeKind::Upf) return mobile_->router_name(node);
  return topology_.node(node).name;
}

std::vector<net::NodeId> Simulation::routers() const {
  std::vector<net::NodeId> out;
  for (const auto& n : topology_.nodes()) {
    if (engine(n.id) != nullptr) out.push_back(n.id);
  }
  return out;
}

fwd::DataPlane Simulation::data_plane() const {
  fwd::DataPlane plane{topology_, {}};
  for (const auto& n : topology_.nodes()) {
    if (n.kind == net::NodeKind::Host) {
      plane.tables[n.id] = fwd::host_table(topology_, n.id);
    } else if (n.kind == net::NodeKind::Upf) {
      plane.tables[n.id] = fwd::from_rules(mobile_->installed_rules(n.id));
    } else if (auto it = engines_.find(n.id); it != engines_.end()) {
      plane.tables[n.id] = fwd::from_routing_entries(it->second.table());
    }
  }
  return plane;
}

bool Simulation::is_periodic(const Event& ev) const {
  if (ev.kind == EventKind::Timer) return true;
  if (const auto* d = std::get_if<WireDelivery>(&ev.payload)) return lsp::is_hello(d->bytes);
  if (const auto* c = std::get_if<ChannelDelivery>(&ev.payload)) {
    const auto* frame = std::get_if<mobile::GtpFrame>(&c->payload);
    return frame != nullptr && lsp::is_hello(frame->payload);
  }
  return false;
}

bool Simulation::participates(net::NodeId node) const {
  const auto* e = engine(node);
  return e != nullptr && e->started();
}

bool Simulation::quiescent() const {
  for (const auto& [key, ev] : queue_.pending()) {
    if (!is_periodic(ev)) return false;
  }
  auto neighbor_state = [&](const net::InterfaceId& iface) -> std::optional<lsp::NeighborState> {
    for (const auto& n : engine(iface.node)->neighbors()) {
      if (n.via_interface == iface) return n.state;
    }
    return std::nullopt;
  };
  for (const auto& [id, l] : topology_.links()) {
    if (!participates(l.a.node) || !participates(l.b.node)) continue;
    auto sa = neighbor_state(l.a);
    auto sb = neighbor_state(l.b);
    if (l.up()) {
      if (sa != lsp::NeighborState::Full || sb != lsp::NeighborState::Full) return false;
    } else if (sa || sb) {
      return false;
    }
  }
  return true;
}

bool Simulation::converged() const {
  auto nodes = routers();
  std::map<net::NodeId, net::NodeId> parent;
  for (auto n : nodes) parent[n] = n;
  auto find = [&](net::NodeId n) {
    while (parent[n] != n) n = parent[n] = parent[parent[n]];
    return n;
  };
  for (const auto& [id, l] : topology_.links()) {
    if (!l.up() || !participates(l.a.node) || !participates(l.b.node)) continue;
    parent[find(l.a.node)] = find(l.b.node);
  }
  std::map<net::NodeId, const lsp::Lsdb*> reference;
  for (auto n : nodes) {
    if (!participates(n)) continue;
    auto root = find(n);
    auto [it, fresh] = reference.try_emplace(root, &engine(n)->lsdb());
    if (!fresh && *it->second != engine(n)->lsdb()) return false;
  }
  return true;
}

std::vector<std::string> Simulation::audit() const {
  auto out = mobile_->audit();
  for (const auto& [node, engine] : engines_) {
    const auto& n = topology_.node(node);
    if (engine.interfaces().size() != n.interfaces.size()) {
      out.push_back(n.name + ": routing engine interfaces do not mirror the topology");
    }
  }
  for (const auto& [id, l] : topology_.links()) {
    if (topology_.find_interface(l.a) == nullptr || topology_.find_interface(l.b) == nullptr) {
      out.push_back("link " + std::to_string(id.value) + " has a dangling end");
    }
  }
  return out;
}

}  // namespace msrsim::sim
