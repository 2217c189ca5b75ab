#include "msrsim/lsp/spf.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <tuple>

namespace msrsim::lsp {

namespace {

struct Edge {
  RouterId to;
  Metric metric;
  net::IpAddress local;
  net::IpAddress remote;
};

using Graph = std::map<RouterId, std::vector<Edge>>;

// Only adjacencies advertised from both ends, matched on the link addresses.
Graph confirmed_graph(const Lsdb& lsdb) {
  std::set<std::tuple<RouterId, RouterId, net::IpAddress, net::IpAddress>> advertised;
  for (const auto& [origin, lsa] : lsdb) {
    for (const auto& e : lsa.entries) {
      if (const auto* adj = std::get_if<Adjacency>(&e)) {
        advertised.emplace(origin, adj->neighbor, adj->local_address, adj->neighbor_address);
      }
    }
  }
  Graph g;
  for (const auto& [origin, lsa] : lsdb) {
    auto& out = g[origin];
    for (const auto& e : lsa.entries) {
      const auto* adj = std::get_if<Adjacency>(&e);
      if (adj == nullptr || adj->neighbor == origin) continue;
      if (advertised.contains({adj->neighbor, origin, adj->neighbor_address, adj->local_address})) {
        out.push_back(Edge{adj->neighbor, adj->metric, adj->local_address, adj->neighbor_address});
      }
    }
  }
  return g;
}

struct FirstHop {
  net::IpAddress next_hop;
  const RouterInterface* iface;
  Metric metric;
  RouterId neighbor;
};

std::vector<FirstHop> first_hops(const Graph& g, RouterId self, std::span<const RouterInterface> ifaces) {
  std::vector<FirstHop> hops;
  auto it = g.find(self);
  if (it == g.end()) return hops;
  for (const auto& e : it->second) {
    auto iface = std::find_if(ifaces.begin(), ifaces.end(),
                              [&](const RouterInterface& i) { return i.address == e.local; });
    if (iface == ifaces.end() || !iface->up) continue;
    hops.push_back(FirstHop{e.remote, &*iface, e.metric, e.to});
  }
  return hops;
}

std::set<net::IpPrefix> attached_to(const Lsdb& lsdb, RouterId self, std::span<const RouterInterface> ifaces) {
  std::set<net::IpPrefix> own;
  for (const auto& i : ifaces) own.insert(i.subnet);
  if (auto it = lsdb.find(self); it != lsdb.end()) {
    for (const auto& e : it->second.entries)
      if (const auto* p = std::get_if<AttachedPrefix>(&e)) own.insert(p->prefix);
  }
  return own;
}

// Path label ordered by cost, then first-hop address, then egress ordinal.
// Extending a path keeps its first hop, so the order survives relaxation.
struct Label {
  std::uint64_t cost = std::numeric_limits<std::uint64_t>::max();
  std::uint32_t next_hop = 0;
  std::uint32_t ordinal = 0;
  const RouterInterface* iface = nullptr;

  auto key() const { return std::tie(cost, next_hop, ordinal); }
  bool operator<(const Label& o) const { return key() < o.key(); }
};

std::map<RouterId, std::uint64_t> distances(const Graph& g, RouterId from, RouterId excluded) {
  std::map<RouterId, std::uint64_t> dist;
  using Item = std::pair<std::uint64_t, RouterId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[from] = 0;
  pq.emplace(0, from);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d != dist[u]) continue;
    auto it = g.find(u);
    if (it == g.end()) continue;
    for (const auto& e : it->second) {
      if (e.to == excluded) continue;
      std::uint64_t nd = d + e.metric;
      auto [pos, fresh] = dist.try_emplace(e.to, nd);
      if (fresh || nd < pos->second) {
        pos->second = nd;
        pq.emplace(nd, e.to);
      }
    }
  }
  return dist;
}

}  // namespace

std::vector<RoutingEntry> compute_spf(const Lsdb& lsdb, RouterId self,
                                      std::span<const RouterInterface> interfaces) {
  if (!lsdb.contains(self)) return {};
  Graph g = confirmed_graph(lsdb);

  std::map<RouterId, Label> best;
  std::set<std::pair<Label, RouterId>> frontier;
  auto relax = [&](RouterId v, const Label& l) {
    auto it = best.find(v);
    if (it != best.end() && !(l < it->second)) return;
    if (it != best.end()) frontier.erase({it->second, v});
    best[v] = l;
    frontier.emplace(l, v);
  };
  for (const auto& h : first_hops(g, self, interfaces)) {
    relax(h.neighbor, Label{h.metric, h.next_hop.value(), h.iface->id.ordinal, h.iface});
  }
  std::set<RouterId> done{self};
  while (!frontier.empty()) {
    auto [label, u] = *frontier.begin();
    frontier.erase(frontier.begin());
    done.insert(u);
    for (const auto& e : g[u]) {
      if (done.contains(e.to)) continue;
      Label next = label;
      next.cost += e.metric;
      relax(e.to, next);
    }
  }

  auto own = attached_to(lsdb, self, interfaces);
  std::map<net::IpPrefix, Label> routes;
  for (const auto& [router, label] : best) {
    for (const auto& e : lsdb.at(router).entries) {
      const auto* p = std::get_if<AttachedPrefix>(&e);
      if (p == nullptr || own.contains(p->prefix)) continue;
      Label l = label;
      l.cost += p->metric;
      auto it = routes.find(p->prefix);
      if (it == routes.end() || l < it->second) routes[p->prefix] = l;
    }
  }

  std::vector<RoutingEntry> table;
  table.reserve(routes.size());
  for (const auto& [prefix, l] : routes) {
    table.push_back(RoutingEntry{prefix, net::IpAddress{l.next_hop}, l.iface->id, static_cast<Metric>(l.cost)});
  }
  return table;
}

std::vector<RoutingEntry> compute_candidates(const Lsdb& lsdb, RouterId self,
                                             std::span<const RouterInterface> interfaces) {
  if (!lsdb.contains(self)) return {};
  Graph g = confirmed_graph(lsdb);
  auto own = attached_to(lsdb, self, interfaces);

  std::vector<RoutingEntry> rows;
  for (const auto& h : first_hops(g, self, interfaces)) {
    std::map<net::IpPrefix, std::uint64_t> cost;
    for (const auto& [router, d] : distances(g, h.neighbor, self)) {
      for (const auto& e : lsdb.at(router).entries) {
        const auto* p = std::get_if<AttachedPrefix>(&e);
        if (p == nullptr || own.contains(p->prefix)) continue;
        std::uint64_t c = h.metric + d + p->metric;
        auto [it, fresh] = cost.try_emplace(p->prefix, c);
        if (!fresh) it->second = std::min(it->second, c);
      }
    }
    for (const auto& [prefix, c] : cost) {
      rows.push_back(RoutingEntry{prefix, h.next_hop, h.iface->id, static_cast<Metric>(c)});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const RoutingEntry& a, const RoutingEntry& b) {
    return std::tie(a.destination, a.metric, a.next_hop, a.destination_interface) <
           std::tie(b.destination, b.metric, b.next_hop, b.destination_interface);
  });
  return rows;
}

}  // namespace msrsim::lsp
