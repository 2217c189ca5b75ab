#include "msrsim/lsp/lsdb.hpp"

namespace msrsim::lsp {

InstallResult install_lsa(Lsdb& lsdb, const Lsa& lsa) {
  auto it = lsdb.find(lsa.origin);
  if (it == lsdb.end()) {
    lsdb.emplace(lsa.origin, lsa);
    return InstallResult::Installed;
  }
  if (lsa.seq == it->second.seq) return InstallResult::Duplicate;
  if (lsa.seq < it->second.seq) return InstallResult::StaleIgnored;
  it->second = lsa;
  return InstallResult::Installed;
}

}  // namespace msrsim::lsp
