#pragma once

#include <map>

#include "msrsim/lsp/messages.hpp"

namespace msrsim::lsp {

enum class InstallResult { Installed, StaleIgnored, Duplicate };

/// Newest LSA per origin.
using Lsdb = std::map<RouterId, Lsa>;

/// Installs only a strictly newer sequence number for the origin.
InstallResult install_lsa(Lsdb& lsdb, const Lsa& lsa);

}  // namespace msrsim::lsp
