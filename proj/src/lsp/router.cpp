#include "msrsim/lsp/router.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "msrsim/errors.hpp"

namespace msrsim::lsp {

std::string_view to_string(NeighborEventKind kind) {
  switch (kind) {
    case NeighborEventKind::NoChange: return "no-change";
    case NeighborEventKind::NewNeighbor: return "init";
    case NeighborEventKind::NewAdjacency: return "full";
    case NeighborEventKind::Refreshed: return "refreshed";
    case NeighborEventKind::AdjacencyLost: return "one-way";
    case NeighborEventKind::Removed: return "removed";
  }
  return "?";
}

LinkStateRouter::LinkStateRouter(RouterId id, ProtocolTimers timers) : id_(id), timers_(timers) {}

void LinkStateRouter::add_interface(const RouterInterface& iface) {
  auto pos = std::lower_bound(interfaces_.begin(), interfaces_.end(), iface.id,
                              [](const RouterInterface& i, const net::InterfaceId& id) { return i.id < id; });
  if (pos != interfaces_.end() && pos->id == iface.id) {
    *pos = iface;
  } else {
    interfaces_.insert(pos, iface);
  }
}

void LinkStateRouter::remove_interface(const net::InterfaceId& iface) {
  std::erase_if(interfaces_, [&](const RouterInterface& i) { return i.id == iface; });
  std::erase_if(neighbors_, [&](const NeighborRecord& n) { return n.via_interface == iface; });
}

RouterInterface* LinkStateRouter::mutable_interface(const net::InterfaceId& iface) {
  auto it = std::find_if(interfaces_.begin(), interfaces_.end(),
                         [&](const RouterInterface& i) { return i.id == iface; });
  return it == interfaces_.end() ? nullptr : &*it;
}

const RouterInterface* LinkStateRouter::find_interface(const net::InterfaceId& iface) const {
  return const_cast<LinkStateRouter*>(this)->mutable_interface(iface);
}

void LinkStateRouter::set_interface_cost(const net::InterfaceId& iface, Metric cost) {
  if (auto* i = mutable_interface(iface)) i->cost = cost;
}

void LinkStateRouter::set_interface_up(const net::InterfaceId& iface, bool up) {
  if (auto* i = mutable_interface(iface)) {
    i->up = up;
    if (!up) std::erase_if(neighbors_, [&](const NeighborRecord& n) { return n.via_interface == iface; });
  }
}

HelloMsg LinkStateRouter::make_hello(const net::InterfaceId& iface, SimTime now) const {
  const RouterInterface* i = find_interface(iface);
  if (i == nullptr) throw Error(ErrorCode::UnknownInterface, "hello on unknown interface");
  if (!i->up) throw Error(ErrorCode::InterfaceDown, "hello on down interface");
  HelloMsg h;
  h.sender = id_;
  h.sender_addr = i->address;
  h.hello_interval_ms = static_cast<std::uint32_t>(timers_.hello_interval_ms);
  h.dead_interval_ms = static_cast<std::uint32_t>(timers_.dead_interval_ms());
  for (const auto& n : neighbors_) {
    if (n.via_interface == iface && now - n.last_heard_ms < timers_.dead_interval_ms()) {
      h.seen_neighbors.push_back(n.id);
    }
  }
  std::sort(h.seen_neighbors.begin(), h.seen_neighbors.end());
  h.seen_neighbors.erase(std::unique(h.seen_neighbors.begin(), h.seen_neighbors.end()), h.seen_neighbors.end());
  return h;
}

NeighborEvent LinkStateRouter::process_hello(const net::InterfaceId& iface, const HelloMsg& msg, SimTime now) {
  NeighborEvent ev{NeighborEventKind::NoChange, msg.sender, iface};
  const RouterInterface* i = find_interface(iface);
  if (i == nullptr || !i->up || msg.sender == id_) return ev;
  bool lists_us = std::find(msg.seen_neighbors.begin(), msg.seen_neighbors.end(), id_) != msg.seen_neighbors.end();
  auto it = std::find_if(neighbors_.begin(), neighbors_.end(), [&](const NeighborRecord& n) {
    return n.via_interface == iface && n.id == msg.sender;
  });
  if (it == neighbors_.end()) {
    NeighborState state = lists_us ? NeighborState::Full : NeighborState::Init;
    neighbors_.push_back(NeighborRecord{msg.sender, iface, msg.sender_addr, state, now});
    ev.kind = lists_us ? NeighborEventKind::NewAdjacency : NeighborEventKind::NewNeighbor;
    return ev;
  }
  it->last_heard_ms = now;
  it->address = msg.sender_addr;
  if (lists_us && it->state == NeighborState::Init) {
    it->state = NeighborState::Full;
    ev.kind = NeighborEventKind::NewAdjacency;
  } else if (!lists_us && it->state == NeighborState::Full) {
    it->state = NeighborState::Init;
    ev.kind = NeighborEventKind::AdjacencyLost;
  } else {
    ev.kind = NeighborEventKind::Refreshed;
  }
  return ev;
}

std::vector<LsaEntry> LinkStateRouter::own_entries() const {
  std::vector<LsaEntry> entries;
  for (const auto& n : neighbors_) {
    if (n.state != NeighborState::Full) continue;
    const RouterInterface* i = find_interface(n.via_interface);
    if (i == nullptr || !i->up) continue;
    entries.emplace_back(Adjacency{n.id, i->address, n.address, i->cost});
  }
  for (const auto& i : interfaces_) {
    if (!i.up) continue;
    entries.emplace_back(AttachedPrefix{i.subnet, i.linked ? i.cost : Metric{0}});
  }
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  return entries;
}

Lsa LinkStateRouter::originate_lsa(SimTime now) {
  Lsa lsa{id_, ++own_seq_, own_entries(), now};
  lsdb_[id_] = lsa;
  return lsa;
}

InstallResult LinkStateRouter::install(const Lsa& lsa) { return install_lsa(lsdb_, lsa); }

std::vector<Emission> LinkStateRouter::flood(const Lsa& lsa, InstallResult result,
                                             std::optional<net::InterfaceId> arrival) const {
  std::vector<Emission> out;
  if (result != InstallResult::Installed) return out;
  std::vector<net::InterfaceId> targets;
  for (const auto& n : neighbors_) {
    if (n.state != NeighborState::Full || (arrival && n.via_interface == *arrival)) continue;
    const RouterInterface* i = find_interface(n.via_interface);
    if (i == nullptr || !i->up) continue;
    targets.push_back(n.via_interface);
  }
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  for (const auto& t : targets) out.push_back(Emission{t, LsUpdate{{lsa}}});
  return out;
}

std::vector<NeighborEvent> LinkStateRouter::expire(SimTime now) {
  std::vector<NeighborEvent> events;
  for (const auto& n : neighbors_) {
    if (now - n.last_heard_ms >= timers_.dead_interval_ms()) {
      events.push_back(NeighborEvent{NeighborEventKind::Removed, n.id, n.via_interface});
    }
  }
  std::erase_if(neighbors_, [&](const NeighborRecord& n) { return now - n.last_heard_ms >= timers_.dead_interval_ms(); });
  std::sort(events.begin(), events.end(), [](const NeighborEvent& a, const NeighborEvent& b) {
    return std::tie(a.neighbor, a.via) < std::tie(b.neighbor, b.via);
  });
  return events;
}

std::vector<RoutingEntry> LinkStateRouter::compute_spf() const {
  return lsp::compute_spf(lsdb_, id_, interfaces_);
}

std::vector<RoutingEntry> LinkStateRouter::compute_candidates() const {
  return lsp::compute_candidates(lsdb_, id_, interfaces_);
}

void LinkStateRouter::reoriginate_if_changed(SimTime now, StepResult& out, bool force) {
  auto current = lsdb_.find(id_);
  if (!force && current != lsdb_.end() && current->second.entries == own_entries()) return;
  Lsa lsa = originate_lsa(now);
  auto floods = flood(lsa, InstallResult::Installed, std::nullopt);
  out.emissions.insert(out.emissions.end(), floods.begin(), floods.end());
  out.originated = lsa;
  recompute(out);
}

void LinkStateRouter::recompute(StepResult& out) {
  auto table = compute_spf();
  if (table != table_) {
    table_ = std::move(table);
    out.table_changed = true;
  }
}

StepResult LinkStateRouter::start(SimTime now) {
  StepResult out;
  if (started_) return out;
  started_ = true;
  reoriginate_if_changed(now, out, true);
  StepResult hellos = tick(now);
  out.emissions.insert(out.emissions.end(), hellos.emissions.begin(), hellos.emissions.end());
  return out;
}

StepResult LinkStateRouter::tick(SimTime now) {
  StepResult out;
  if (!started_) return out;
  out.neighbor_events = expire(now);
  if (!out.neighbor_events.empty()) reoriginate_if_changed(now, out);
  for (const auto& i : interfaces_) {
    if (i.up && i.linked) out.emissions.push_back(Emission{i.id, make_hello(i.id, now)});
  }
  return out;
}

StepResult LinkStateRouter::receive(const net::InterfaceId& iface, const RoutingMessage& msg, SimTime now) {
  StepResult out;
  if (!started_) return out;
  if (const auto* hello = std::get_if<HelloMsg>(&msg)) {
    NeighborEvent ev = process_hello(iface, *hello, now);
    if (ev.kind == NeighborEventKind::NoChange || ev.kind == NeighborEventKind::Refreshed) return out;
    out.neighbor_events.push_back(ev);
    if (ev.kind == NeighborEventKind::NewAdjacency || ev.kind == NeighborEventKind::AdjacencyLost) {
      reoriginate_if_changed(now, out);
    }
    if (ev.kind == NeighborEventKind::NewAdjacency) {
      // Database synchronisation: hand the new neighbor everything we know.
      LsUpdate all;
      for (const auto& [origin, lsa] : lsdb_) all.lsas.push_back(lsa);
      out.emissions.push_back(Emission{iface, std::move(all)});
    }
    return out;
  }

  bool known = std::any_of(neighbors_.begin(), neighbors_.end(),
                           [&](const NeighborRecord& n) { return n.via_interface == iface; });
  if (!known) return out;
  std::map<net::InterfaceId, LsUpdate> outgoing;
  bool changed = false;
  bool bump_own = false;
  for (const auto& lsa : std::get<LsUpdate>(msg).lsas) {
    if (lsa.origin == id_) {
      // A copy of ourselves from a previous incarnation: jump past it.
      if (lsa.seq > own_seq_) {
        own_seq_ = lsa.seq;
        bump_own = true;
      }
      continue;
    }
    InstallResult r = install(lsa);
    if (r != InstallResult::Installed) continue;
    changed = true;
    out.installed.push_back(lsa);
    for (auto& e : flood(lsa, r, iface)) {
      outgoing[e.iface].lsas.push_back(std::get<LsUpdate>(e.message).lsas.front());
    }
  }
  for (auto& [target, update] : outgoing) out.emissions.push_back(Emission{target, std::move(update)});
  if (bump_own) reoriginate_if_changed(now, out, true);
  if (changed) recompute(out);
  return out;
}

StepResult LinkStateRouter::interfaces_changed(SimTime now) {
  StepResult out;
  if (!started_) return out;
  reoriginate_if_changed(now, out);
  recompute(out);
  return out;
}

}  // namespace msrsim::lsp
