#include "generator.hpp"

#include <map>
#include <numeric>
#include <set>
#include <tuple>
#include <random>
#include <string>

namespace msrsim::testing {

namespace {

class Builder {
 public:
  Builder(std::uint64_t seed, Metric max_metric, bool symmetric)
      : rng_(seed), max_metric_(max_metric), symmetric_(symmetric) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  Metric metric() { return static_cast<Metric>(uniform(1, static_cast<int>(max_metric_))); }

  void node(const std::string& name, net::NodeKind kind) { s.nodes.push_back({name, kind}); }

  std::uint32_t iface(const std::string& node, net::IpAddress addr, net::IpPrefix subnet) {
    std::uint32_t ord = ++ordinals_[node];
    s.interfaces.push_back({node, ord, addr, subnet});
    return ord;
  }

  /// Point-to-point link on a fresh 10.x.y.0/24.
  void link(const std::string& a, const std::string& b) {
    auto [addr_a, addr_b, subnet] = fresh_subnet();
    auto oa = iface(a, addr_a, subnet);
    auto ob = iface(b, addr_b, subnet);
    Metric ab = metric();
    Metric ba = symmetric_ || chance(0.7) ? ab : metric();
    s.links.push_back({{a, std::to_string(oa)}, {b, std::to_string(ob)}, ab, ba});
  }

  void session(const std::string& ue, const std::string& upf) {
    auto [addr, unused, subnet] = fresh_subnet(100);
    Metric up = metric();
    Metric down = symmetric_ || chance(0.7) ? up : metric();
    s.pdus.push_back({ue, upf, addr, subnet, up, down});
  }

  std::tuple<net::IpAddress, net::IpAddress, net::IpPrefix> fresh_subnet(std::uint32_t offset = 0) {
    std::uint32_t k = next_subnet_++;
    std::uint32_t base = (10u << 24) | ((offset + k / 256) << 16) | ((k % 256) << 8);
    return {net::IpAddress{base | 1}, net::IpAddress{base | 2}, net::IpPrefix(net::IpAddress{base}, 24)};
  }

  net::Scenario s;

 private:
  std::mt19937_64 rng_;
  Metric max_metric_;
  bool symmetric_;
  std::map<std::string, std::uint32_t> ordinals_;
  std::uint32_t next_subnet_ = 0;
};

struct UnionFind {
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
  std::vector<int> parent;
};

}  // namespace

net::Scenario generate_scenario(std::uint64_t seed, const GeneratorParams& p) {
  Builder b(seed, p.max_metric, p.symmetric);
  int routers = b.uniform(p.min_routers, p.max_routers);
  int upfs = b.uniform(p.min_upfs, p.max_upfs);
  int sessions = b.uniform(p.min_sessions, p.max_sessions);
  b.s.seed = seed;

  // Vertices 0..routers-1 are external routers, then UPFs.
  std::vector<std::string> names;
  for (int i = 0; i < routers; ++i) names.push_back("r" + std::to_string(i + 1));
  for (int i = 0; i < upfs; ++i) names.push_back("upf" + std::to_string(i + 1));

  // Session endpoints: UE routers drawn from the first half of the routers.
  std::vector<std::pair<int, int>> session_pairs;
  std::set<int> ue_routers;
  int ue_pool = std::max(1, routers / 2);
  for (int i = 0; i < sessions; ++i) {
    int ue = b.uniform(0, ue_pool - 1);
    int upf = routers + b.uniform(0, upfs - 1);
    session_pairs.emplace_back(ue, upf);
    ue_routers.insert(ue);
  }

  // Every UPF gets at least one N6 link to a non-UE router (or any router
  // when all of them are UEs).
  std::vector<std::pair<int, int>> n6_pairs;
  auto pick_n6_router = [&]() {
    std::vector<int> pool;
    for (int r = 0; r < routers; ++r) {
      if (!ue_routers.contains(r)) pool.push_back(r);
    }
    if (pool.empty()) return b.uniform(0, routers - 1);
    return pool[b.uniform(0, static_cast<int>(pool.size()) - 1)];
  };
  for (int u = routers; u < routers + upfs; ++u) n6_pairs.emplace_back(pick_n6_router(), u);
  if (b.chance(0.5)) n6_pairs.emplace_back(pick_n6_router(), routers + b.uniform(0, upfs - 1));

  UnionFind uf(routers + upfs);
  for (auto [ue, upf] : session_pairs) uf.unite(ue, upf);
  for (auto [r, upf] : n6_pairs) uf.unite(r, upf);
  std::vector<std::pair<int, int>> router_links;
  // Join every component to router r1's with a router-router link. Each UPF
  // shares a component with its N6 router, so every component has a router.
  for (int v = 1; v < routers + upfs; ++v) {
    if (uf.find(v) == uf.find(0)) continue;
    int a = 0;
    while (uf.find(a) != uf.find(v)) ++a;
    std::vector<int> joined;
    for (int r = 0; r < routers; ++r) {
      if (uf.find(r) == uf.find(0)) joined.push_back(r);
    }
    int c = joined[b.uniform(0, static_cast<int>(joined.size()) - 1)];
    router_links.emplace_back(a, c);
    uf.unite(a, c);
  }
  for (int i = 0; i < p.extra_links && routers > 1; ++i) {
    int a = b.uniform(0, routers - 1);
    int c = b.uniform(0, routers - 1);
    if (a != c) router_links.emplace_back(a, c);
  }

  b.node("smf1", net::NodeKind::Smf);
  for (int u = 0; u < upfs; ++u) b.node(names[routers + u], net::NodeKind::Upf);
  std::set<int> n6_routers;
  for (auto [r, upf] : n6_pairs) n6_routers.insert(r);
  for (int r = 0; r < routers; ++r) {
    net::NodeKind kind = ue_routers.contains(r)   ? net::NodeKind::UeRouter
                         : n6_routers.contains(r) ? net::NodeKind::N6Router
                                                  : net::NodeKind::ExternalRouter;
    b.node(names[r], kind);
  }
  for (int h = 0; h < p.hosts; ++h) b.node("h" + std::to_string(h + 1), net::NodeKind::Host);

  for (auto [r, upf] : n6_pairs) b.link(names[r], names[upf]);
  for (auto [a, c] : router_links) b.link(names[a], names[c]);
  for (int h = 0; h < p.hosts; ++h) b.link("h" + std::to_string(h + 1), names[b.uniform(0, routers - 1)]);
  if (b.chance(0.5)) {
    // A stub network nobody links to.
    auto [addr, unused, subnet] = b.fresh_subnet(200);
    b.iface(names[b.uniform(0, routers - 1)], addr, subnet);
  }
  for (auto [ue, upf] : session_pairs) b.session(names[ue], names[upf]);
  return b.s;
}

net::Scenario generate_router_graph(std::uint64_t seed, int routers, Metric max_metric) {
  Builder b(seed, max_metric, false);
  b.s.seed = seed;
  for (int r = 0; r < routers; ++r) b.node("r" + std::to_string(r + 1), net::NodeKind::ExternalRouter);
  auto name = [](int r) { return "r" + std::to_string(r + 1); };
  for (int r = 1; r < routers; ++r) b.link(name(r), name(b.uniform(0, r - 1)));
  int extra = b.uniform(0, routers);
  for (int i = 0; i < extra; ++i) {
    int a = b.uniform(0, routers - 1);
    int c = b.uniform(0, routers - 1);
    if (a != c) b.link(name(a), name(c));
  }
  int stubs = b.uniform(0, 2);
  for (int i = 0; i < stubs; ++i) {
    auto [addr, unused, subnet] = b.fresh_subnet(200);
    b.iface(name(b.uniform(0, routers - 1)), addr, subnet);
  }
  return b.s;
}

}  // namespace msrsim::testing
