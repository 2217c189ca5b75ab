#include "msrsim/msrouter/table_dump.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>
#include <tuple>

namespace msrsim::msrouter {

namespace {

constexpr std::array<std::string_view, 4> kHeader = {"Destination", "Next Hop", "Destination interface",
                                                     "Metric"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<DumpRow> make_dump_rows(std::span<const lsp::RoutingEntry> entries, const InterfaceNamer& namer,
                                    std::span<const HostLabel> hosts) {
  struct Keyed {
    net::IpPrefix dest;
    std::string label;
    const lsp::RoutingEntry* entry;
  };
  std::vector<Keyed> keyed;
  for (const auto& e : entries) {
    keyed.push_back({e.destination, e.destination.to_string(), &e});
    for (const auto& h : hosts) {
      if (h.subnet == e.destination) {
        keyed.push_back({net::IpPrefix(h.address, 32), h.address.to_string() + "/32 (" + h.name + ")", &e});
      }
    }
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    return std::tie(a.dest, a.entry->metric, a.entry->next_hop) < std::tie(b.dest, b.entry->metric, b.entry->next_hop);
  });
  std::vector<DumpRow> rows;
  rows.reserve(keyed.size());
  for (const auto& k : keyed) {
    rows.push_back(DumpRow{k.label, k.entry->next_hop.to_string(), namer(k.entry->destination_interface),
                           k.entry->metric});
  }
  return rows;
}

std::string render_routing_table(std::span<const DumpRow> rows) {
  std::array<std::size_t, 4> width{};
  for (std::size_t c = 0; c < 4; ++c) width[c] = kHeader[c].size();
  for (const auto& r : rows) {
    width[0] = std::max(width[0], r.destination.size());
    width[1] = std::max(width[1], r.next_hop.size());
    width[2] = std::max(width[2], r.interface.size());
  }
  std::ostringstream os;
  auto line = [&](std::string_view a, std::string_view b, std::string_view c, std::string_view d) {
    os << a << std::string(width[0] - a.size(), ' ') << " | " << b << std::string(width[1] - b.size(), ' ')
       << " | " << c << std::string(width[2] - c.size(), ' ') << " | " << d << '\n';
  };
  line(kHeader[0], kHeader[1], kHeader[2], kHeader[3]);
  for (const auto& r : rows) line(r.destination, r.next_hop, r.interface, std::to_string(r.metric));
  return os.str();
}

std::vector<DumpRow> parse_routing_table(std::string_view text) {
  std::vector<DumpRow> rows;
  bool header_seen = false;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    std::array<std::string_view, 4> cols;
    std::size_t n = 0;
    while (n < 4) {
      auto bar = line.find(" | ");
      cols[n++] = trim(line.substr(0, bar));
      if (bar == std::string_view::npos) break;
      line = line.substr(bar + 3);
    }
    if (n != 4) continue;
    if (!header_seen && cols[0] == kHeader[0]) {
      header_seen = true;
      continue;
    }
    Metric metric = 0;
    auto [ptr, ec] = std::from_chars(cols[3].data(), cols[3].data() + cols[3].size(), metric);
    if (ec != std::errc{}) continue;
    rows.push_back(DumpRow{std::string(cols[0]), std::string(cols[1]), std::string(cols[2]), metric});
  }
  return rows;
}

}  // namespace msrsim::msrouter
