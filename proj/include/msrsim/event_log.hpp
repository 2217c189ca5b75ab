#pragma once

#include <string>
#include <utility>
#include <vector>

#include "msrsim/types.hpp"

namespace msrsim {

enum class OutputMode { Human, Machine };

// One line of the run log. Step records (kind == "step") carry a label such as
// "A1.S2" mirroring the numbered sequence flows of both integration approaches.
struct LogRecord {
  SimTime time = 0;
  std::string kind;
  std::string entity;
  std::string step;
  std::string label;
  std::vector<std::pair<std::string, std::string>> fields;

  LogRecord& with(std::string key, std::string value) {
    fields.emplace_back(std::move(key), std::move(value));
    return *this;
  }
};

// human:   t=<ms> <entity> <step> <label> k=v ...
// machine: t=<ms> kind=<kind> entity=<entity> [step=<step>] label=<label> k=v ...
std::string render(const LogRecord& rec, OutputMode mode);

class EventLog {
 public:
  void append(LogRecord rec) { records_.push_back(std::move(rec)); }
  const std::vector<LogRecord>& records() const { return records_; }
  std::string render(OutputMode mode) const;

 private:
  std::vector<LogRecord> records_;
};

}  // namespace msrsim
