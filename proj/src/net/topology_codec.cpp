#include "msrsim/net/topology_codec.hpp"

#include "msrsim/errors.hpp"

namespace msrsim::net {

namespace {

IpAddress address_of(const nlohmann::json& j) {
  auto a = IpAddress::parse(j.get<std::string>());
  if (!a) throw Error(ErrorCode::InvariantViolation, "bad address in state file");
  return *a;
}

IpPrefix prefix_of(const nlohmann::json& j) {
  auto p = IpPrefix::parse(j.get<std::string>());
  if (!p) throw Error(ErrorCode::InvariantViolation, "bad prefix in state file");
  return *p;
}

nlohmann::json endpoint(const InterfaceId& id) { return {{"node", id.node.value}, {"ordinal", id.ordinal}}; }

InterfaceId endpoint_of(const nlohmann::json& j) {
  return InterfaceId{NodeId{j.at("node").get<std::uint32_t>()}, j.at("ordinal").get<std::uint32_t>()};
}

}  // namespace

nlohmann::json TopologyCodec::encode(const Topology& topology) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : topology.nodes()) {
    nlohmann::json ifaces = nlohmann::json::array();
    for (const auto& i : n.interfaces) {
      ifaces.push_back({{"ordinal", i.id.ordinal},
                        {"address", i.address.to_string()},
                        {"subnet", i.subnet.to_string()},
                        {"name", i.name},
                        {"up", i.admin_state == AdminState::Up}});
    }
    nodes.push_back({{"name", n.name}, {"kind", keyword(n.kind)}, {"interfaces", std::move(ifaces)}});
  }
  nlohmann::json links = nlohmann::json::array();
  for (const auto& [id, l] : topology.links()) {
    links.push_back({{"id", id.value},
                     {"a", endpoint(l.a)},
                     {"b", endpoint(l.b)},
                     {"metric_ab", l.metric_ab},
                     {"metric_ba", l.metric_ba},
                     {"up", l.up()}});
  }
  return {{"nodes", std::move(nodes)}, {"links", std::move(links)}, {"next_link", topology.next_link_}};
}

Topology TopologyCodec::decode(const nlohmann::json& doc) {
  try {
    Topology t;
    for (const auto& n : doc.at("nodes")) {
      auto kind = parse_node_kind(n.at("kind").get<std::string>());
      if (!kind) throw Error(ErrorCode::InvariantViolation, "bad node kind in state file");
      NodeId id = t.add_node(*kind, n.at("name").get<std::string>());
      for (const auto& i : n.at("interfaces")) {
        auto iid = t.insert_interface(id, i.at("ordinal").get<std::uint32_t>(), address_of(i.at("address")),
                                      prefix_of(i.at("subnet")), i.at("name").get<std::string>());
        if (!i.at("up").get<bool>()) t.set_admin_state(iid, AdminState::Down);
      }
    }
    for (const auto& l : doc.at("links")) {
      LinkId id{l.at("id").get<std::uint32_t>()};
      Link link{id, endpoint_of(l.at("a")), endpoint_of(l.at("b")), l.at("metric_ab").get<Metric>(),
                l.at("metric_ba").get<Metric>(), l.at("up").get<bool>() ? LinkState::Up : LinkState::Down};
      if (t.find_interface(link.a) == nullptr || t.find_interface(link.b) == nullptr) {
        throw Error(ErrorCode::InvariantViolation, "dangling link in state file");
      }
      t.links_.emplace(id, link);
      t.link_by_iface_.emplace(link.a, id);
      t.link_by_iface_.emplace(link.b, id);
    }
    t.next_link_ = doc.at("next_link").get<std::uint32_t>();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvariantViolation, std::string("malformed state file: ") + e.what());
  }
}

}  // namespace msrsim::net
