#include "msrsim/lsp/step_log.hpp"

namespace msrsim::lsp {

std::vector<LogRecord> describe_step(const LinkStateRouter& router, const StepResult& step, SimTime now,
                                     std::string_view entity, const InterfaceLabeler& label) {
  std::vector<LogRecord> out;
  for (const auto& ev : step.neighbor_events) {
    LogRecord rec{now, "neighbor", std::string(entity), {}, std::string(to_string(ev.kind)), {}};
    rec.with("neighbor", ev.neighbor.to_string()).with("iface", label(ev.via));
    out.push_back(std::move(rec));
  }
  if (step.originated) {
    LogRecord rec{now, "lsa", std::string(entity), {}, "originate", {}};
    rec.with("seq", std::to_string(step.originated->seq))
        .with("entries", std::to_string(step.originated->entries.size()));
    out.push_back(std::move(rec));
  }
  if (step.table_changed) {
    LogRecord rec{now, "spf", std::string(entity), {}, "table-changed", {}};
    rec.with("routes", std::to_string(router.table().size()));
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace msrsim::lsp
