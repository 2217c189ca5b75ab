#include "msrsim/event_log.hpp"

#include <sstream>

namespace msrsim {

std::string render(const LogRecord& rec, OutputMode mode) {
  std::ostringstream os;
  os << "t=" << rec.time;
  if (mode == OutputMode::Human) {
    os << ' ' << rec.entity;
    if (!rec.step.empty()) os << ' ' << rec.step;
    os << ' ' << rec.label;
  } else {
    os << " kind=" << rec.kind << " entity=" << rec.entity;
    if (!rec.step.empty()) os << " step=" << rec.step;
    os << " label=" << rec.label;
  }
  for (const auto& [k, v] : rec.fields) os << ' ' << k << '=' << v;
  return os.str();
}

std::string EventLog::render(OutputMode mode) const {
  std::string out;
  for (const auto& rec : records_) {
    out += msrsim::render(rec, mode);
    out += '\n';
  }
  return out;
}

}  // namespace msrsim
