#include "msrsim/lsp/wire.hpp"

namespace msrsim::lsp {

namespace {

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v >> 8));
    u8(static_cast<std::uint8_t>(v));
  }
  void u32(std::uint32_t v) {
    u16(static_cast<std::uint16_t>(v >> 16));
    u16(static_cast<std::uint16_t>(v));
  }
  void u64(std::uint64_t v) {
    u32(static_cast<std::uint32_t>(v >> 32));
    u32(static_cast<std::uint32_t>(v));
  }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  bool ok() const { return ok_; }
  bool at_end() const { return pos_ == in_.size(); }

  std::uint8_t u8() {
    if (pos_ >= in_.size()) {
      ok_ = false;
      return 0;
    }
    return in_[pos_++];
  }
  std::uint16_t u16() {
    std::uint16_t hi = u8();
    return static_cast<std::uint16_t>((hi << 8) | u8());
  }
  std::uint32_t u32() {
    std::uint32_t hi = u16();
    return (hi << 16) | u16();
  }
  std::uint64_t u64() {
    std::uint64_t hi = u32();
    return (hi << 32) | u32();
  }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  bool ok_ = true;
};

constexpr std::uint8_t kAdjacencyEntry = 1;
constexpr std::uint8_t kPrefixEntry = 2;

void write_lsa(Writer& w, const Lsa& lsa) {
  w.u32(lsa.origin.value);
  w.u32(lsa.seq);
  w.u64(static_cast<std::uint64_t>(lsa.originated_at_ms));
  w.u16(static_cast<std::uint16_t>(lsa.entries.size()));
  for (const auto& e : lsa.entries) {
    if (const auto* adj = std::get_if<Adjacency>(&e)) {
      w.u8(kAdjacencyEntry);
      w.u32(adj->neighbor.value);
      w.u32(adj->local_address.value());
      w.u32(adj->neighbor_address.value());
      w.u32(adj->metric);
    } else {
      const auto& p = std::get<AttachedPrefix>(e);
      w.u8(kPrefixEntry);
      w.u32(p.prefix.base().value());
      w.u8(static_cast<std::uint8_t>(p.prefix.length()));
      w.u32(p.metric);
    }
  }
}

std::optional<Lsa> read_lsa(Reader& r) {
  Lsa lsa;
  lsa.origin = RouterId{r.u32()};
  lsa.seq = r.u32();
  lsa.originated_at_ms = static_cast<SimTime>(r.u64());
  std::uint16_t n = r.u16();
  for (std::uint16_t i = 0; i < n && r.ok(); ++i) {
    std::uint8_t kind = r.u8();
    if (kind == kAdjacencyEntry) {
      Adjacency adj;
      adj.neighbor = RouterId{r.u32()};
      adj.local_address = net::IpAddress{r.u32()};
      adj.neighbor_address = net::IpAddress{r.u32()};
      adj.metric = r.u32();
      lsa.entries.emplace_back(adj);
    } else if (kind == kPrefixEntry) {
      net::IpAddress base{r.u32()};
      int len = r.u8();
      Metric metric = r.u32();
      if (len > 32 || (base.value() & ~net::prefix_mask(len)) != 0) return std::nullopt;
      lsa.entries.emplace_back(AttachedPrefix{net::IpPrefix(base, len), metric});
    } else {
      return std::nullopt;
    }
  }
  if (!r.ok()) return std::nullopt;
  return lsa;
}

}  // namespace

Bytes encode(const RoutingMessage& msg) {
  Writer w;
  if (const auto* hello = std::get_if<HelloMsg>(&msg)) {
    w.u8(kHelloType);
    w.u32(hello->sender.value);
    w.u32(hello->sender_addr.value());
    w.u32(hello->hello_interval_ms);
    w.u32(hello->dead_interval_ms);
    w.u16(static_cast<std::uint16_t>(hello->seen_neighbors.size()));
    for (const auto& id : hello->seen_neighbors) w.u32(id.value);
  } else {
    const auto& update = std::get<LsUpdate>(msg);
    w.u8(kUpdateType);
    w.u16(static_cast<std::uint16_t>(update.lsas.size()));
    for (const auto& lsa : update.lsas) write_lsa(w, lsa);
  }
  return w.take();
}

std::optional<RoutingMessage> decode(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  std::uint8_t type = r.u8();
  if (type == kHelloType) {
    HelloMsg h;
    h.sender = RouterId{r.u32()};
    h.sender_addr = net::IpAddress{r.u32()};
    h.hello_interval_ms = r.u32();
    h.dead_interval_ms = r.u32();
    std::uint16_t n = r.u16();
    for (std::uint16_t i = 0; i < n && r.ok(); ++i) h.seen_neighbors.push_back(RouterId{r.u32()});
    if (!r.ok() || !r.at_end()) return std::nullopt;
    return RoutingMessage{std::move(h)};
  }
  if (type == kUpdateType) {
    LsUpdate u;
    std::uint16_t n = r.u16();
    for (std::uint16_t i = 0; i < n && r.ok(); ++i) {
      auto lsa = read_lsa(r);
      if (!lsa) return std::nullopt;
      u.lsas.push_back(std::move(*lsa));
    }
    if (!r.ok() || !r.at_end()) return std::nullopt;
    return RoutingMessage{std::move(u)};
  }
  return std::nullopt;
}

}  // namespace msrsim::lsp
