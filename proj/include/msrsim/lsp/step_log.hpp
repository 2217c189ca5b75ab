#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "msrsim/event_log.hpp"
#include "msrsim/lsp/router.hpp"

namespace msrsim::lsp {

using InterfaceLabeler = std::function<std::string(const net::InterfaceId&)>;

/// Log records for the protocol-level effects of one engine step: neighbor
/// transitions, own-LSA origination and routing-table changes.
std::vector<LogRecord> describe_step(const LinkStateRouter& router, const StepResult& step, SimTime now,
                                     std::string_view entity, const InterfaceLabeler& label);

}  // namespace msrsim::lsp
