#include "msrsim/net/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

namespace msrsim::net {

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) words.push_back(line.substr(i, j - i));
    i = j;
  }
  return words;
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

std::optional<std::uint32_t> number_suffix(std::string_view port, std::string_view prefix) {
  if (!port.starts_with(prefix)) return std::nullopt;
  return parse_number<std::uint32_t>(port.substr(prefix.size()));
}

class Parser {
 public:
  ParseResult run(std::string_view text) {
    int line_no = 0;
    while (!text.empty()) {
      ++line_no;
      auto nl = text.find('\n');
      std::string_view line = text.substr(0, nl);
      text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      auto words = split_words(line);
      if (!words.empty()) parse_line(line_no, words);
    }
    if (diagnostics_.empty()) validate();
    ParseResult result;
    result.diagnostics = std::move(diagnostics_);
    if (result.diagnostics.empty()) result.scenario = std::move(scenario_);
    return result;
  }

 private:
  void error(int line, ErrorCode code, std::string message) {
    diagnostics_.push_back(Diagnostic{line, code, std::move(message)});
  }

  std::optional<Metric> metric(int line, std::string_view word) {
    auto m = parse_number<std::int64_t>(word);
    if (!m) {
      error(line, ErrorCode::SyntaxError, "bad metric '" + std::string(word) + "'");
      return std::nullopt;
    }
    if (!metric_in_range(*m)) {
      error(line, ErrorCode::MetricOutOfRange, "metric " + std::string(word) + " outside [1, 65535]");
      return std::nullopt;
    }
    return static_cast<Metric>(*m);
  }

  std::optional<PortRef> port(int line, std::string_view word) {
    auto dot = word.find('.');
    if (dot == std::string_view::npos || dot == 0 || dot + 1 == word.size()) {
      error(line, ErrorCode::SyntaxError, "expected <node>.<port>, got '" + std::string(word) + "'");
      return std::nullopt;
    }
    return PortRef{std::string(word.substr(0, dot)), std::string(word.substr(dot + 1))};
  }

  // <ue> <upf> <addr>[/len] [m_ab [m_ba]]
  std::optional<PduDecl> pdu(int line, std::span<const std::string_view> w) {
    if (w.size() < 3 || w.size() > 5) {
      error(line, ErrorCode::SyntaxError, "expected <ue> <upf> <addr>[/len] [metric [metric]]");
      return std::nullopt;
    }
    auto addr = parse_interface_address(w[2]);
    if (!addr) {
      error(line, ErrorCode::SyntaxError, "bad address '" + std::string(w[2]) + "'");
      return std::nullopt;
    }
    PduDecl d{std::string(w[0]), std::string(w[1]), addr->first, addr->second, 1, 1};
    if (w.size() >= 4) {
      auto m = metric(line, w[3]);
      if (!m) return std::nullopt;
      d.ue_to_upf = d.upf_to_ue = *m;
    }
    if (w.size() == 5) {
      auto m = metric(line, w[4]);
      if (!m) return std::nullopt;
      d.upf_to_ue = *m;
    }
    return d;
  }

  void parse_line(int line, const std::vector<std::string_view>& w) {
    std::string_view head = w[0];
    auto args = std::span(w).subspan(1);
    if (head == "seed" || head == "[seed]") {
      auto s = args.size() == 1 ? parse_number<std::uint64_t>(args[0]) : std::nullopt;
      if (!s) return error(line, ErrorCode::SyntaxError, "expected seed <n>");
      scenario_.seed = *s;
    } else if (head == "[node]") {
      if (args.size() != 2) return error(line, ErrorCode::SyntaxError, "expected [node] <name> <kind>");
      auto kind = parse_node_kind(args[1]);
      if (!kind) return error(line, ErrorCode::SyntaxError, "unknown node kind '" + std::string(args[1]) + "'");
      if (args[0].find('.') != std::string_view::npos) {
        return error(line, ErrorCode::SyntaxError, "node names may not contain '.'");
      }
      scenario_.nodes.push_back(NodeDecl{std::string(args[0]), *kind});
      node_lines_.push_back(line);
    } else if (head == "[iface]") {
      if (args.size() != 3) {
        return error(line, ErrorCode::SyntaxError, "expected [iface] <node> <ordinal> <addr>[/len]");
      }
      auto ord = parse_number<std::uint32_t>(args[1]);
      if (!ord || *ord == 0) return error(line, ErrorCode::SyntaxError, "ordinal must be a positive integer");
      auto addr = parse_interface_address(args[2]);
      if (!addr) return error(line, ErrorCode::SyntaxError, "bad address '" + std::string(args[2]) + "'");
      scenario_.interfaces.push_back(InterfaceDecl{std::string(args[0]), *ord, addr->first, addr->second});
      iface_lines_.push_back(line);
    } else if (head == "[link]") {
      if (args.size() < 3 || args.size() > 4) {
        return error(line, ErrorCode::SyntaxError,
                     "expected [link] <node>.<ord> <node>.<ord> <metric_ab> [<metric_ba>]");
      }
      auto a = port(line, args[0]);
      auto b = port(line, args[1]);
      auto mab = metric(line, args[2]);
      auto mba = args.size() == 4 ? metric(line, args[3]) : mab;
      if (!a || !b || !mab || !mba) return;
      scenario_.links.push_back(LinkDecl{*a, *b, *mab, *mba});
      link_lines_.push_back(line);
    } else if (head == "[pdu]") {
      auto d = pdu(line, args);
      if (!d) return;
      scenario_.pdus.push_back(*d);
      pdu_lines_.push_back(line);
    } else if (head == "[event]") {
      parse_event(line, args);
    } else {
      error(line, ErrorCode::SyntaxError, "unknown directive '" + std::string(head) + "'");
    }
  }

  void parse_event(int line, std::span<const std::string_view> w) {
    if (w.size() < 2) return error(line, ErrorCode::SyntaxError, "expected [event] <time_ms> <kind> <args>");
    auto t = parse_number<SimTime>(w[0]);
    if (!t || *t < 0) return error(line, ErrorCode::SyntaxError, "bad event time '" + std::string(w[0]) + "'");
    std::string_view kind = w[1];
    auto args = w.subspan(2);
    std::optional<ScriptedAction> action;
    if (kind == "link-down" || kind == "link-up") {
      if (args.size() != 1) return error(line, ErrorCode::SyntaxError, std::string(kind) + " takes <node>.<port>");
      auto p = port(line, args[0]);
      if (!p) return;
      if (kind == "link-down") action = LinkDownAction{*p};
      else action = LinkUpAction{*p};
    } else if (kind == "metric") {
      if (args.size() < 2 || args.size() > 3) {
        return error(line, ErrorCode::SyntaxError, "metric takes <node>.<port> <metric_out> [<metric_in>]");
      }
      auto p = port(line, args[0]);
      auto out = metric(line, args[1]);
      auto in = args.size() == 3 ? metric(line, args[2]) : out;
      if (!p || !out || !in) return;
      action = MetricChangeAction{*p, *out, *in};
    } else if (kind == "pdu-establish") {
      auto d = pdu(line, args);
      if (!d) return;
      action = PduEstablishAction{*d};
    } else if (kind == "pdu-release") {
      auto sid = args.size() == 1 ? parse_number<std::uint32_t>(args[0]) : std::nullopt;
      if (!sid || *sid == 0) return error(line, ErrorCode::SyntaxError, "pdu-release takes <session id>");
      action = PduReleaseAction{*sid};
    } else {
      return error(line, ErrorCode::SyntaxError, "unknown event kind '" + std::string(kind) + "'");
    }
    scenario_.events.push_back(EventDecl{*t, *action});
    event_lines_.push_back(line);
  }

  // Second pass: referential closure and model invariants.
  void validate() {
    std::map<std::string, NodeKind, std::less<>> kinds;
    for (std::size_t i = 0; i < scenario_.nodes.size(); ++i) {
      const auto& n = scenario_.nodes[i];
      if (!kinds.emplace(n.name, n.kind).second) {
        error(node_lines_[i], ErrorCode::DuplicateName, "node '" + n.name + "' declared twice");
      }
    }

    std::set<IpAddress> addresses;
    std::map<std::pair<std::string, std::uint32_t>, IpPrefix> ifaces;
    std::map<std::string, int> iface_count;
    for (std::size_t i = 0; i < scenario_.interfaces.size(); ++i) {
      const auto& d = scenario_.interfaces[i];
      int line = iface_lines_[i];
      if (!kinds.contains(d.node)) {
        error(line, ErrorCode::UnknownReference, "unknown node '" + d.node + "'");
        continue;
      }
      if (!ifaces.emplace(std::pair{d.node, d.ordinal}, d.subnet).second) {
        error(line, ErrorCode::InvariantViolation, d.node + " ordinal " + std::to_string(d.ordinal) + " declared twice");
      }
      if (!addresses.insert(d.address).second) {
        error(line, ErrorCode::AddressInUse, d.address.to_string() + " used twice");
      }
      ++iface_count[d.node];
    }
    for (std::size_t i = 0; i < scenario_.nodes.size(); ++i) {
      const auto& n = scenario_.nodes[i];
      if (n.kind == NodeKind::Host && iface_count[n.name] != 1) {
        error(node_lines_[i], ErrorCode::InvariantViolation, "host '" + n.name + "' must have exactly one interface");
      }
    }

    auto resolve = [&](int line, const PortRef& p) -> std::optional<std::pair<std::string, std::uint32_t>> {
      if (!kinds.contains(p.node)) {
        error(line, ErrorCode::UnknownReference, "unknown node '" + p.node + "'");
        return std::nullopt;
      }
      auto ord = port_ordinal(p.port);
      if (!ord || !ifaces.contains({p.node, *ord})) {
        error(line, ErrorCode::UnknownReference, "unknown port '" + p.to_string() + "'");
        return std::nullopt;
      }
      return std::pair{p.node, *ord};
    };

    std::set<std::pair<std::string, std::uint32_t>> linked;
    for (std::size_t i = 0; i < scenario_.links.size(); ++i) {
      const auto& d = scenario_.links[i];
      int line = link_lines_[i];
      auto a = resolve(line, d.a);
      auto b = resolve(line, d.b);
      if (!a || !b) continue;
      if (*a == *b) {
        error(line, ErrorCode::InvariantViolation, "link from a port to itself");
        continue;
      }
      if (ifaces[*a] != ifaces[*b]) {
        error(line, ErrorCode::SubnetMismatch,
              d.a.to_string() + " is in " + ifaces[*a].to_string() + ", " + d.b.to_string() + " is in " +
                  ifaces[*b].to_string());
      }
      if (!linked.insert(*a).second || !linked.insert(*b).second) {
        error(line, ErrorCode::InvariantViolation, "a port carries at most one link");
      }
    }

    bool any_pdu = !scenario_.pdus.empty();
    auto check_pdu = [&](int line, const PduDecl& d) {
      auto ue = kinds.find(d.ue);
      auto upf = kinds.find(d.upf);
      if (ue == kinds.end()) error(line, ErrorCode::UnknownReference, "unknown node '" + d.ue + "'");
      else if (ue->second != NodeKind::Ue && ue->second != NodeKind::UeRouter)
        error(line, ErrorCode::InvariantViolation, d.ue + " is not a UE or UE-router");
      if (upf == kinds.end()) error(line, ErrorCode::UnknownReference, "unknown node '" + d.upf + "'");
      else if (upf->second != NodeKind::Upf)
        error(line, ErrorCode::InvariantViolation, d.upf + " is not a UPF");
    };
    for (std::size_t i = 0; i < scenario_.pdus.size(); ++i) {
      check_pdu(pdu_lines_[i], scenario_.pdus[i]);
      if (!addresses.insert(scenario_.pdus[i].ue_address).second) {
        error(pdu_lines_[i], ErrorCode::AddressInUse, scenario_.pdus[i].ue_address.to_string() + " used twice");
      }
    }

    // Session ids continue past the declared ones in event order.
    std::vector<std::size_t> order(scenario_.events.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return scenario_.events[x].time < scenario_.events[y].time;
    });
    std::uint32_t sessions = static_cast<std::uint32_t>(scenario_.pdus.size());
    std::uint32_t total_sessions = sessions;
    for (const auto& e : scenario_.events)
      if (std::holds_alternative<PduEstablishAction>(e.action)) ++total_sessions;

    auto check_event_port = [&](int line, const PortRef& p) {
      if (!kinds.contains(p.node)) {
        error(line, ErrorCode::UnknownReference, "unknown node '" + p.node + "'");
      } else if (auto sid = port_session(p.port)) {
        if (*sid == 0 || *sid > total_sessions) {
          error(line, ErrorCode::UnknownReference, "unknown session port '" + p.to_string() + "'");
        }
      } else {
        resolve(line, p);
      }
    };

    for (std::size_t idx : order) {
      const auto& e = scenario_.events[idx];
      int line = event_lines_[idx];
      std::visit(
          [&](const auto& a) {
            using A = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<A, PduEstablishAction>) {
              any_pdu = true;
              ++sessions;
              check_pdu(line, a.session);
            } else if constexpr (std::is_same_v<A, PduReleaseAction>) {
              if (a.session_id > sessions) {
                error(line, ErrorCode::UnknownReference,
                      "session " + std::to_string(a.session_id) + " does not exist at t=" + std::to_string(e.time));
              }
            } else {
              check_event_port(line, a.port);
            }
          },
          e.action);
    }

    if (any_pdu) {
      bool has_upf = false, has_smf = false;
      for (const auto& [name, kind] : kinds) {
        has_upf |= kind == NodeKind::Upf;
        has_smf |= kind == NodeKind::Smf;
      }
      if (!has_upf || !has_smf) {
        error(0, ErrorCode::InvariantViolation, "PDU sessions need at least one upf and one smf");
      }
    }
  }

  Scenario scenario_;
  std::vector<Diagnostic> diagnostics_;
  std::vector<int> node_lines_, iface_lines_, link_lines_, pdu_lines_, event_lines_;
};

void write_pdu(std::ostream& os, const PduDecl& d) {
  os << d.ue << ' ' << d.upf << ' ' << d.ue_address << '/' << d.ue_subnet.length() << ' ' << d.ue_to_upf;
  if (d.upf_to_ue != d.ue_to_upf) os << ' ' << d.upf_to_ue;
}

}  // namespace

std::string Diagnostic::to_string() const {
  std::string s = line > 0 ? "line " + std::to_string(line) + ": " : std::string{};
  return s + std::string(msrsim::to_string(code)) + ": " + message;
}

ParseResult parse_scenario(std::string_view text) { return Parser{}.run(text); }

std::optional<std::uint32_t> port_ordinal(std::string_view port) {
  if (auto n = parse_number<std::uint32_t>(port)) return n;
  if (auto n = number_suffix(port, "eth")) return n;
  if (auto n = number_suffix(port, "n6-")) return n;
  return std::nullopt;
}

std::optional<std::uint32_t> port_session(std::string_view port) { return number_suffix(port, "pdu-"); }

std::string_view action_name(const ScriptedAction& action) {
  return std::visit(
      [](const auto& a) -> std::string_view {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, LinkDownAction>) return "link-down";
        else if constexpr (std::is_same_v<A, LinkUpAction>) return "link-up";
        else if constexpr (std::is_same_v<A, MetricChangeAction>) return "metric";
        else if constexpr (std::is_same_v<A, PduEstablishAction>) return "pdu-establish";
        else return "pdu-release";
      },
      action);
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream os;
  os << "seed " << s.seed << '\n';
  for (const auto& n : s.nodes) os << "[node] " << n.name << ' ' << keyword(n.kind) << '\n';
  for (const auto& i : s.interfaces) {
    os << "[iface] " << i.node << ' ' << i.ordinal << ' ' << i.address << '/' << i.subnet.length() << '\n';
  }
  for (const auto& l : s.links) {
    os << "[link] " << l.a.to_string() << ' ' << l.b.to_string() << ' ' << l.metric_ab;
    if (l.metric_ba != l.metric_ab) os << ' ' << l.metric_ba;
    os << '\n';
  }
  for (const auto& p : s.pdus) {
    os << "[pdu] ";
    write_pdu(os, p);
    os << '\n';
  }
  for (const auto& e : s.events) {
    os << "[event] " << e.time << ' ' << action_name(e.action);
    std::visit(
        [&](const auto& a) {
          using A = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<A, LinkDownAction> || std::is_same_v<A, LinkUpAction>) {
            os << ' ' << a.port.to_string();
          } else if constexpr (std::is_same_v<A, MetricChangeAction>) {
            os << ' ' << a.port.to_string() << ' ' << a.metric_out;
            if (a.metric_in != a.metric_out) os << ' ' << a.metric_in;
          } else if constexpr (std::is_same_v<A, PduEstablishAction>) {
            os << ' ';
            write_pdu(os, a.session);
          } else {
            os << ' ' << a.session_id;
          }
        },
        e.action);
    os << '\n';
  }
  return os.str();
}

}  // namespace msrsim::net
