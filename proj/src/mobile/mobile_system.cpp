#include "msrsim/mobile/mobile_system.hpp"

#include <algorithm>
#include <set>

#include "msrsim/errors.hpp"
#include "msrsim/lsp/step_log.hpp"
#include "msrsim/lsp/wire.hpp"

namespace msrsim::mobile {

using msrouter::OperatingMode;

std::string_view kind_name(const CpUpMessage& msg) {
  struct Visitor {
    std::string_view operator()(const ConfigureRelay&) const { return "configure-relay"; }
    std::string_view operator()(const InstallRules&) const { return "install-rules"; }
    std::string_view operator()(const TriggerRouting&) const { return "trigger-routing"; }
    std::string_view operator()(const ReportTable&) const { return "report-table"; }
  };
  return std::visit(Visitor{}, msg.body);
}

MobileSystem::MobileSystem(net::Topology& topology, Outbox& outbox, OperatingMode mode,
                           lsp::ProtocolTimers timers)
    : topology_(topology), outbox_(outbox), mode_(mode), timers_(timers) {
  std::uint32_t index = 0;
  for (const auto& node : topology_.nodes()) {
    if (node.kind == net::NodeKind::Upf) {
      upfs_[node.id].index = ++index;
    } else if (node.kind == net::NodeKind::Smf && !smf_) {
      smf_ = node.id;
    }
  }
}

MobileSystem::UpfState& MobileSystem::state(net::NodeId upf) {
  auto it = upfs_.find(upf);
  if (it == upfs_.end()) throw Error(ErrorCode::UnknownReference, "node " + name(upf) + " is not a UPF");
  return it->second;
}

const MobileSystem::UpfState& MobileSystem::state(net::NodeId upf) const {
  return const_cast<MobileSystem*>(this)->state(upf);
}

std::string MobileSystem::name(net::NodeId node) const {
  if (node.value < topology_.nodes().size()) return topology_.node(node).name;
  return "#" + std::to_string(node.value);
}

net::NodeId MobileSystem::require_smf() const {
  if (!smf_) throw Error(ErrorCode::UnknownReference, "scenario has no SMF");
  return *smf_;
}

void MobileSystem::require_mode(OperatingMode mode, std::string_view op) const {
  if (mode_ != mode) {
    throw Error(ErrorCode::ModeMismatch, std::string(op) + " requires mode " + std::string(msrouter::to_string(mode)));
  }
}

LogRecord MobileSystem::step(SimTime now, net::NodeId entity, int number, std::string label) const {
  std::string prefix = mode_ == OperatingMode::CpBased ? "A1.S" : "A2.S";
  return LogRecord{now, "step", name(entity), prefix + std::to_string(number), std::move(label), {}};
}

net::InterfaceId MobileSystem::attach_n6(net::NodeId upf, std::uint32_t ordinal, net::IpAddress address,
                                         net::IpPrefix subnet) {
  if (finalized_) throw Error(ErrorCode::InvariantViolation, "N6 interfaces are attached before finalize()");
  UpfState& st = state(upf);
  auto id = topology_.add_upf_interface(net::UpfInterfaceKey{}, upf, ordinal, address, subnet,
                                        msrouter::map_interface_name(msrouter::MsrInterfaceKind::N6, ordinal));
  st.n6.push_back(msrouter::N6Attachment{id, address, subnet});
  return id;
}

void MobileSystem::finalize() {
  if (finalized_) return;
  finalized_ = true;
  for (auto& [upf, st] : upfs_) {
    // A UPF without N6 interfaces still needs a distinct router id.
    st.router.emplace(upf, mode_, st.n6, timers_, net::IpAddress{st.index});
    sync_engine_interfaces(st);
  }
}

std::vector<net::NodeId> MobileSystem::upfs() const {
  std::vector<net::NodeId> out;
  for (const auto& [id, st] : upfs_) out.push_back(id);
  return out;
}

const msrouter::MsRouter* MobileSystem::find_router(net::NodeId upf) const {
  auto it = upfs_.find(upf);
  if (it == upfs_.end() || !it->second.router) return nullptr;
  return &*it->second.router;
}

const msrouter::MsRouter& MobileSystem::router(net::NodeId upf) const {
  const auto* r = find_router(upf);
  if (r == nullptr) throw Error(ErrorCode::UnknownRouter, "no MS-Router for " + name(upf));
  return *r;
}

std::string MobileSystem::router_name(net::NodeId upf) const { return "msr" + std::to_string(state(upf).index); }

const std::vector<msrouter::ForwardingRule>& MobileSystem::installed_rules(net::NodeId upf) const {
  return state(upf).rules;
}

const PduSession* MobileSystem::find_session(std::uint32_t id) const {
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : &it->second;
}

std::vector<GtpTunnel> MobileSystem::tunnels(net::NodeId upf) const {
  std::vector<GtpTunnel> out;
  for (const auto& [teid, t] : state(upf).tunnels) out.push_back(t);
  return out;
}

std::vector<GtpTunnel> MobileSystem::relay_table(net::NodeId upf) const {
  const UpfState& st = state(upf);
  std::vector<GtpTunnel> out;
  for (const auto& [teid, iface] : st.relay) out.push_back(GtpTunnel{teid, smf_.value_or(net::NodeId{}), upf, iface});
  return out;
}

void MobileSystem::sync_engine_interfaces(UpfState& st) {
  auto& engine = st.router->engine();
  auto live = st.router->interfaces();
  std::vector<net::InterfaceId> stale;
  for (const auto& ri : engine.interfaces()) {
    bool present = std::any_of(live.begin(), live.end(), [&](const auto& m) { return m.id == ri.id; });
    if (!present) stale.push_back(ri.id);
  }
  for (const auto& id : stale) engine.remove_interface(id);
  for (const auto& m : live) {
    lsp::RouterInterface ri{m.id, m.address, m.subnet, 0, false, true};
    if (auto link = topology_.link_on(m.id)) {
      ri.linked = true;
      ri.cost = topology_.link(*link).metric_from(m.id);
    }
    ri.up = topology_.interface(m.id).admin_state == net::AdminState::Up;
    const auto* existing = engine.find_interface(m.id);
    bool going_down = existing != nullptr && existing->up && !ri.up;
    engine.add_interface(ri);
    if (going_down) engine.set_interface_up(m.id, false);
  }
}

void MobileSystem::start(SimTime now) {
  finalize();
  if (started_) return;
  started_ = true;
  for (auto& [upf, st] : upfs_) {
    // Links may have been added after finalize().
    sync_engine_interfaces(st);
    if (mode_ == OperatingMode::CpBased) {
      net::NodeId smf = require_smf();
      auto rec = step(now, smf, 1, "implement-routing");
      rec.with("upf", name(upf))
          .with("router", router_name(upf))
          .with("router_id", st.router->router_id().to_string())
          .with("interfaces", std::to_string(st.router->interfaces().size()));
      outbox_.log(std::move(rec));
      cp_configure_relay(smf, upf, now);
      start_engine(upf, now);
    } else {
      auto rec = step(now, upf, 1, "implement-routing");
      rec.with("router", router_name(upf))
          .with("router_id", st.router->router_id().to_string())
          .with("interfaces", std::to_string(st.router->interfaces().size()));
      outbox_.log(std::move(rec));
      up_trigger_routing(require_smf(), upf, now);
    }
  }
}

void MobileSystem::start_engine(net::NodeId upf, SimTime now) {
  UpfState& st = state(upf);
  if (st.routing_active) return;
  st.routing_active = true;
  handle_step(upf, st.router->engine().start(now), now);
  outbox_.schedule_router_timer(upf, now + timers_.hello_interval_ms);
}

const PduSession& MobileSystem::establish_pdu_session(const SessionRequest& req, SimTime now) {
  finalize();
  const auto& ue_node = topology_.node(req.ue);
  if (ue_node.kind != net::NodeKind::Ue && ue_node.kind != net::NodeKind::UeRouter) {
    throw Error(ErrorCode::UnknownReference, ue_node.name + " cannot hold a PDU session");
  }
  UpfState& st = state(req.upf);
  if (!req.ue_subnet.contains(req.ue_addr)) {
    throw Error(ErrorCode::SubnetMismatch, req.ue_addr.to_string() + " is outside " + req.ue_subnet.to_string());
  }
  if (topology_.find_interface_by_address(req.ue_addr)) {
    throw Error(ErrorCode::AddressInUse, req.ue_addr.to_string());
  }
  if (!metric_in_range(req.ue_to_upf) || !metric_in_range(req.upf_to_ue)) {
    throw Error(ErrorCode::MetricOutOfRange, "PDU session metric");
  }

  std::set<net::IpAddress> in_use;
  for (const auto& node : topology_.nodes()) {
    for (const auto& i : node.interfaces) in_use.insert(i.address);
  }
  net::IpAddress reserved = msrouter::reserve_pdu_iface_address(req.ue_addr, req.ue_subnet, in_use);

  std::uint32_t sid = next_session_++;
  std::string iface_name = msrouter::map_interface_name(msrouter::MsrInterfaceKind::PduSession, sid);
  auto upf_iface = topology_.add_upf_interface(net::UpfInterfaceKey{}, req.upf, topology_.next_free_ordinal(req.upf),
                                               reserved, req.ue_subnet, iface_name);
  auto ue_iface = topology_.add_interface(req.ue, topology_.next_free_ordinal(req.ue), req.ue_addr, req.ue_subnet,
                                          iface_name);
  topology_.add_link(ue_iface, upf_iface, req.ue_to_upf, req.upf_to_ue);
  st.router->attach_session(msrouter::SessionAttachment{sid, upf_iface, reserved, req.ue_subnet});

  PduSession& s = sessions_[sid];
  s = PduSession{sid, req.ue, req.upf, req.ue_addr, req.ue_subnet, reserved, SessionState::Active, upf_iface, ue_iface};

  LogRecord rec{now, "session", name(smf_.value_or(req.upf)), {}, "establish", {}};
  rec.with("session", std::to_string(sid))
      .with("ue", ue_node.name)
      .with("upf", name(req.upf))
      .with("ue_addr", req.ue_addr.to_string())
      .with("reserved", reserved.to_string())
      .with("iface", iface_name);
  outbox_.log(std::move(rec));

  if (started_) {
    if (mode_ == OperatingMode::CpBased) cp_configure_relay(require_smf(), req.upf, now);
    refresh_interfaces(req.upf, now);
    outbox_.external_interfaces_changed(req.ue, now);
  } else {
    sync_engine_interfaces(st);
  }
  return s;
}

void MobileSystem::release_pdu_session(std::uint32_t session_id, SimTime now) {
  auto it = sessions_.find(session_id);
  if (it == sessions_.end() || it->second.state != SessionState::Active) {
    throw Error(ErrorCode::UnknownSession, "session " + std::to_string(session_id));
  }
  PduSession& s = it->second;
  UpfState& st = state(s.upf);
  topology_.remove_interface(s.upf_iface);
  topology_.remove_interface(s.ue_iface);
  st.router->detach_session(session_id);
  std::erase_if(st.rules, [&](const msrouter::ForwardingRule& r) { return r.egress == s.upf_iface; });
  s.state = SessionState::Released;

  LogRecord rec{now, "session", name(smf_.value_or(s.upf)), {}, "release", {}};
  rec.with("session", std::to_string(session_id)).with("upf", name(s.upf)).with("reserved", s.reserved_addr.to_string());
  outbox_.log(std::move(rec));

  if (started_) {
    if (mode_ == OperatingMode::CpBased) cp_configure_relay(require_smf(), s.upf, now);
    refresh_interfaces(s.upf, now);
    outbox_.external_interfaces_changed(s.ue, now);
  } else {
    sync_engine_interfaces(st);
  }
}

void MobileSystem::cp_configure_relay(net::NodeId smf, net::NodeId upf, SimTime now) {
  require_mode(OperatingMode::CpBased, "configure-relay");
  UpfState& st = state(upf);
  auto live = st.router->interfaces();
  std::erase_if(st.tunnels, [&](const auto& kv) {
    return std::none_of(live.begin(), live.end(), [&](const auto& m) { return m.id == kv.second.bound_interface; });
  });
  for (const auto& m : live) {
    bool bound = std::any_of(st.tunnels.begin(), st.tunnels.end(),
                             [&](const auto& kv) { return kv.second.bound_interface == m.id; });
    if (bound) continue;
    Teid teid = next_teid_++;
    st.tunnels.emplace(teid, GtpTunnel{teid, smf, upf, m.id});
  }
  ConfigureRelay cfg;
  for (const auto& [teid, t] : st.tunnels) cfg.tunnels.push_back(t);
  auto rec = step(now, smf, 2, "configure-relay");
  rec.with("upf", name(upf)).with("tunnels", std::to_string(cfg.tunnels.size()));
  outbox_.log(std::move(rec));
  outbox_.send_channel(smf, upf, CpUpMessage{upf, std::move(cfg)});
}

void MobileSystem::cp_send_routing_msg(net::NodeId smf, net::NodeId upf, const net::InterfaceId& iface,
                                       const lsp::RoutingMessage& msg, SimTime now) {
  require_mode(OperatingMode::CpBased, "send-routing-msg");
  UpfState& st = state(upf);
  auto tunnel = std::find_if(st.tunnels.begin(), st.tunnels.end(),
                             [&](const auto& kv) { return kv.second.bound_interface == iface; });
  if (tunnel == st.tunnels.end()) {
    throw Error(ErrorCode::UnknownInterface, "no tunnel bound to interface " + std::to_string(iface.ordinal) +
                                                 " of " + name(upf));
  }
  if (std::holds_alternative<lsp::LsUpdate>(msg)) {
    auto rec = step(now, smf, 3, "exchange-routing");
    rec.with("dir", "out")
        .with("upf", name(upf))
        .with("iface", st.router->find_interface(iface)->name)
        .with("teid", std::to_string(tunnel->first))
        .with("lsas", std::to_string(std::get<lsp::LsUpdate>(msg).lsas.size()));
    outbox_.log(std::move(rec));
  }
  outbox_.send_channel(smf, upf, GtpFrame{tunnel->first, upf, lsp::encode(msg)});
}

std::pair<msrouter::MsrInterface, lsp::RoutingMessage> MobileSystem::cp_receive_routing_msg(net::NodeId,
                                                                                            Teid teid,
                                                                                            const Bytes& payload) {
  require_mode(OperatingMode::CpBased, "receive-routing-msg");
  for (const auto& [upf, st] : upfs_) {
    auto it = st.tunnels.find(teid);
    if (it == st.tunnels.end()) continue;
    auto iface = st.router->find_interface(it->second.bound_interface);
    if (!iface) break;
    auto msg = lsp::decode(payload);
    if (!msg) throw Error(ErrorCode::InvariantViolation, "undecodable routing payload on teid " + std::to_string(teid));
    return {*iface, std::move(*msg)};
  }
  throw Error(ErrorCode::UnknownTeid, std::to_string(teid));
}

void MobileSystem::up_trigger_routing(net::NodeId smf, net::NodeId upf, SimTime now) {
  require_mode(OperatingMode::UpBased, "trigger-routing");
  state(upf);
  auto rec = step(now, smf, 2, "trigger-routing");
  rec.with("upf", name(upf));
  outbox_.log(std::move(rec));
  outbox_.send_channel(smf, upf, CpUpMessage{upf, TriggerRouting{}});
}

void MobileSystem::up_report_table(net::NodeId upf, net::NodeId smf, const std::vector<lsp::RoutingEntry>& table,
                                   SimTime now) {
  require_mode(OperatingMode::UpBased, "report-table");
  auto rec = step(now, upf, 5, "report-table");
  rec.with("routes", std::to_string(table.size()));
  outbox_.log(std::move(rec));
  outbox_.send_channel(upf, smf, CpUpMessage{upf, ReportTable{table}});
}

void MobileSystem::install_rules(net::NodeId upf, std::vector<msrouter::ForwardingRule> rules) {
  UpfState& st = state(upf);
  for (const auto& r : rules) {
    auto iface = st.router->find_interface(r.egress);
    std::string what = r.match_prefix.to_string() + " via " + r.next_hop.to_string();
    if (!iface) throw Error(ErrorCode::InvalidRule, what + ": egress is not an interface of " + name(upf));
    if (!iface->subnet.contains(r.next_hop) || iface->address == r.next_hop) {
      throw Error(ErrorCode::InvalidRule, what + ": next hop is not a neighbor on " + iface->name);
    }
  }
  std::sort(rules.begin(), rules.end());
  st.rules = std::move(rules);
}

void MobileSystem::handle_step(net::NodeId upf, const lsp::StepResult& result, SimTime now) {
  UpfState& st = state(upf);
  auto& engine = st.router->engine();
  auto labeler = [&](const net::InterfaceId& id) {
    auto i = st.router->find_interface(id);
    return i ? i->name : std::to_string(id.ordinal);
  };
  for (auto& rec : lsp::describe_step(engine, result, now, router_name(upf), labeler)) outbox_.log(std::move(rec));
  for (const auto& e : result.emissions) {
    auto iface = st.router->find_interface(e.iface);
    if (!iface) continue;
    if (mode_ == OperatingMode::CpBased) {
      cp_send_routing_msg(require_smf(), upf, e.iface, e.message, now);
      continue;
    }
    if (std::holds_alternative<lsp::LsUpdate>(e.message)) {
      auto rec = step(now, upf, 3, "exchange-routing");
      rec.with("dir", "out").with("iface", iface->name).with("lsas",
                                                            std::to_string(std::get<lsp::LsUpdate>(e.message).lsas.size()));
      outbox_.log(std::move(rec));
    }
    outbox_.send_on_wire(e.iface, iface->address, lsp::encode(e.message));
  }
  if (result.table_changed) publish_table(upf, now);
}

void MobileSystem::publish_table(net::NodeId upf, SimTime now) {
  const auto& table = state(upf).router->engine().table();
  if (mode_ == OperatingMode::CpBased) {
    auto rec = step(now, require_smf(), 4, "build-table");
    rec.with("upf", name(upf)).with("routes", std::to_string(table.size()));
    outbox_.log(std::move(rec));
    send_install(upf, table, now);
  } else {
    auto rec = step(now, upf, 4, "build-table");
    rec.with("routes", std::to_string(table.size()));
    outbox_.log(std::move(rec));
    up_report_table(upf, require_smf(), table, now);
  }
}

void MobileSystem::send_install(net::NodeId upf, const std::vector<lsp::RoutingEntry>& table, SimTime now) {
  net::NodeId smf = require_smf();
  auto interfaces = state(upf).router->interfaces();
  auto translated = msrouter::translate_routes(table, interfaces);
  auto rec = step(now, smf, 5, "translate");
  rec.with("upf", name(upf)).with("rules", std::to_string(translated.rules.size()));
  outbox_.log(std::move(rec));
  for (const auto& d : translated.diagnostics) {
    outbox_.log(LogRecord{now, "warn", name(smf), {}, "translate-drop", {{"detail", d}}});
  }
  outbox_.send_channel(smf, upf, CpUpMessage{upf, InstallRules{std::move(translated.rules)}});
}

void MobileSystem::on_wire_receive(const net::InterfaceId& ingress, net::IpAddress, const Bytes& bytes, SimTime now) {
  net::NodeId upf = ingress.node;
  UpfState& st = state(upf);
  if (!st.router || !st.router->find_interface(ingress)) return;
  if (mode_ == OperatingMode::CpBased) {
    auto tunnel = std::find_if(st.relay.begin(), st.relay.end(), [&](const auto& kv) { return kv.second == ingress; });
    if (tunnel == st.relay.end()) {
      outbox_.log(LogRecord{now, "warn", name(upf), {}, "relay-drop",
                            {{"iface", st.router->find_interface(ingress)->name}, {"reason", "no-tunnel"}}});
      return;
    }
    outbox_.send_channel(upf, require_smf(), GtpFrame{tunnel->first, upf, bytes});
    return;
  }
  auto msg = lsp::decode(bytes);
  if (!msg) {
    outbox_.log(LogRecord{now, "warn", name(upf), {}, "decode-drop", {}});
    return;
  }
  if (const auto* update = std::get_if<lsp::LsUpdate>(&*msg)) {
    auto rec = step(now, upf, 3, "exchange-routing");
    rec.with("dir", "in").with("iface", st.router->find_interface(ingress)->name).with("lsas",
                                                                                      std::to_string(update->lsas.size()));
    outbox_.log(std::move(rec));
  }
  handle_step(upf, st.router->engine().receive(ingress, *msg, now), now);
}

void MobileSystem::on_channel_receive(net::NodeId from, net::NodeId to, const ChannelPayload& payload, SimTime now) {
  if (const auto* frame = std::get_if<GtpFrame>(&payload)) {
    if (upfs_.contains(to)) {
      // UPF side: decapsulate and emit unmodified on the bound interface.
      UpfState& st = state(to);
      auto it = st.relay.find(frame->teid);
      auto iface = it == st.relay.end() ? std::nullopt : st.router->find_interface(it->second);
      if (!iface) {
        outbox_.log(LogRecord{now, "warn", name(to), {}, "relay-drop",
                              {{"teid", std::to_string(frame->teid)}, {"reason", "unknown-teid"}}});
        return;
      }
      outbox_.send_on_wire(iface->id, iface->address, frame->payload);
      return;
    }
    std::pair<msrouter::MsrInterface, lsp::RoutingMessage> received;
    try {
      received = cp_receive_routing_msg(to, frame->teid, frame->payload);
    } catch (const Error& e) {
      outbox_.log(LogRecord{now, "warn", name(to), {}, "tunnel-drop",
                            {{"teid", std::to_string(frame->teid)}, {"reason", std::string(to_string(e.code()))}}});
      return;
    }
    auto& [iface, msg] = received;
    if (const auto* update = std::get_if<lsp::LsUpdate>(&msg)) {
      auto rec = step(now, to, 3, "exchange-routing");
      rec.with("dir", "in")
          .with("upf", name(frame->upf))
          .with("iface", iface.name)
          .with("teid", std::to_string(frame->teid))
          .with("lsas", std::to_string(update->lsas.size()));
      outbox_.log(std::move(rec));
    }
    handle_step(frame->upf, state(frame->upf).router->engine().receive(iface.id, msg, now), now);
    return;
  }

  const auto& msg = std::get<CpUpMessage>(payload);
  UpfState& st = state(msg.upf);
  if (const auto* cfg = std::get_if<ConfigureRelay>(&msg.body)) {
    st.relay.clear();
    for (const auto& t : cfg->tunnels) st.relay[t.teid] = t.bound_interface;
    auto rec = step(now, to, 2, "relay-configured");
    rec.with("tunnels", std::to_string(cfg->tunnels.size()));
    outbox_.log(std::move(rec));
  } else if (const auto* install = std::get_if<InstallRules>(&msg.body)) {
    try {
      install_rules(msg.upf, install->rules);
    } catch (const Error& e) {
      outbox_.log(LogRecord{now, "warn", name(to), {}, "install-rejected", {{"detail", e.what()}}});
      return;
    }
    auto rec = step(now, to, 6, "install-rules");
    rec.with("rules", std::to_string(st.rules.size()));
    outbox_.log(std::move(rec));
    outbox_.log(step(now, to, 7, "optimal-routing"));
  } else if (std::holds_alternative<TriggerRouting>(msg.body)) {
    start_engine(msg.upf, now);
  } else if (const auto* report = std::get_if<ReportTable>(&msg.body)) {
    (void)from;
    send_install(msg.upf, report->table, now);
  }
}

void MobileSystem::on_router_timer(net::NodeId upf, SimTime now) {
  UpfState& st = state(upf);
  if (!st.routing_active) return;
  handle_step(upf, st.router->engine().tick(now), now);
  outbox_.schedule_router_timer(upf, now + timers_.hello_interval_ms);
}

void MobileSystem::refresh_interfaces(net::NodeId upf, SimTime now) {
  UpfState& st = state(upf);
  sync_engine_interfaces(st);
  handle_step(upf, st.router->engine().interfaces_changed(now), now);
}

std::vector<std::string> MobileSystem::audit() const {
  std::vector<std::string> out;
  std::set<net::IpAddress> reserved;
  for (const auto& [upf, st] : upfs_) {
    if (!st.router) continue;
    auto ifaces = st.router->interfaces();
    const auto& node = topology_.node(upf);
    if (node.interfaces.size() != ifaces.size()) {
      out.push_back(node.name + ": topology has " + std::to_string(node.interfaces.size()) +
                    " interfaces, MS-Router has " + std::to_string(ifaces.size()));
    }
    for (const auto& m : ifaces) {
      const auto* ti = topology_.find_interface(m.id);
      if (ti == nullptr || ti->address != m.address || ti->name != m.name) {
        out.push_back(node.name + ": interface " + m.name + " does not mirror the topology");
      }
    }
    if (mode_ == OperatingMode::UpBased && !st.tunnels.empty()) {
      out.push_back(node.name + ": GTP tunnels exist in UP-based mode");
    }
    if (mode_ == OperatingMode::CpBased && st.routing_active) {
      std::set<net::InterfaceId> bound;
      for (const auto& [teid, t] : st.tunnels) {
        if (!bound.insert(t.bound_interface).second) out.push_back(node.name + ": interface bound to two TEIDs");
      }
      std::set<net::InterfaceId> live;
      for (const auto& m : ifaces) live.insert(m.id);
      if (bound != live) out.push_back(node.name + ": TEID map is not a bijection over live interfaces");
    }
    for (const auto& r : st.rules) {
      auto m = st.router->find_interface(r.egress);
      if (!m || !m->subnet.contains(r.next_hop)) {
        out.push_back(node.name + ": rule " + r.match_prefix.to_string() + " is not sound");
      }
    }
  }
  for (const auto& [sid, s] : sessions_) {
    if (s.state != SessionState::Active) continue;
    std::string tag = "session " + std::to_string(sid);
    if (!s.ue_subnet.contains(s.reserved_addr) || s.reserved_addr == s.ue_addr) {
      out.push_back(tag + ": reserved address violates the same-subnet rule");
    }
    if (!reserved.insert(s.reserved_addr).second) out.push_back(tag + ": reserved address reused");
    const auto& ifaces = state(s.upf).router->interfaces();
    auto n = std::count_if(ifaces.begin(), ifaces.end(), [&](const auto& m) {
      return m.kind == msrouter::MsrInterfaceKind::PduSession && m.source_id == sid;
    });
    if (n != 1) out.push_back(tag + ": appears " + std::to_string(n) + " times in its MS-Router");
  }
  return out;
}

}  // namespace msrsim::mobile
