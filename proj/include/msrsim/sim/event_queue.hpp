#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>

#include "msrsim/mobile/messages.hpp"
#include "msrsim/net/scenario.hpp"
#include "msrsim/net/topology.hpp"

namespace msrsim::sim {

enum class EventKind { DeliverMsg, Timer, LinkDown, LinkUp, MetricChange, PduEstablish, PduRelease, CpUpDeliver };
std::string_view to_string(EventKind kind);

/// A frame arriving at `ingress` over `link`.
struct WireDelivery {
  net::InterfaceId ingress;
  net::IpAddress src;
  Bytes bytes;
  net::LinkId link;
};

/// Hello-interval tick of the routing engine at `node` (a UPF for MS-Routers).
struct TimerFire {
  net::NodeId node;
};

struct ChannelDelivery {
  net::NodeId from;
  net::NodeId to;
  mobile::ChannelPayload payload;
};

using EventPayload = std::variant<WireDelivery, TimerFire, ChannelDelivery, net::ScriptedAction>;

struct Event {
  SimTime time = 0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::Timer;
  EventPayload payload;
};

/// Events ordered by (time, seq); seq is assigned when scheduling, so events
/// at equal times run in scheduling order.
class EventQueue {
 public:
  SimTime now() const { return now_; }
  /// Throws TimeInPast when time < now().
  std::uint64_t schedule(SimTime time, EventKind kind, EventPayload payload);
  bool empty() const { return events_.empty(); }
  std::size_t size() const { return events_.size(); }
  std::optional<SimTime> next_time() const;
  /// Removes the earliest event and advances the clock to its time.
  Event pop();
  /// Moves the clock forward without running anything; never backwards.
  void advance_to(SimTime time);

  using Key = std::pair<SimTime, std::uint64_t>;
  const std::map<Key, Event>& pending() const { return events_; }

 private:
  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::map<Key, Event> events_;
};

}  // namespace msrsim::sim
