#include "msrsim/sim/event_queue.hpp"

#include "msrsim/errors.hpp"

namespace msrsim::sim {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::DeliverMsg: return "deliver-msg";
    case EventKind::Timer: return "timer";
    case EventKind::LinkDown: return "link-down";
    case EventKind::LinkUp: return "link-up";
    case EventKind::MetricChange: return "metric-change";
    case EventKind::PduEstablish: return "pdu-establish";
    case EventKind::PduRelease: return "pdu-release";
    case EventKind::CpUpDeliver: return "cp-up-deliver";
  }
  return "?";
}

std::uint64_t EventQueue::schedule(SimTime time, EventKind kind, EventPayload payload) {
  if (time < now_) {
    throw Error(ErrorCode::TimeInPast, "t=" + std::to_string(time) + " < now=" + std::to_string(now_));
  }
  std::uint64_t seq = next_seq_++;
  events_.emplace(Key{time, seq}, Event{time, seq, kind, std::move(payload)});
  return seq;
}

std::optional<SimTime> EventQueue::next_time() const {
  if (events_.empty()) return std::nullopt;
  return events_.begin()->first.first;
}

Event EventQueue::pop() {
  auto node = events_.extract(events_.begin());
  now_ = node.mapped().time;
  return std::move(node.mapped());
}

void EventQueue::advance_to(SimTime time) {
  if (time > now_) now_ = time;
}

}  // namespace msrsim::sim
