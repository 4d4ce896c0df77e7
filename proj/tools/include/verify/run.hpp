#pragma once

#include "verify/config.hpp"

#include "heisenberg/identities.hpp"

#include <vector>

namespace verify {

struct RunResult {
  std::vector<heis::IdentityReport> reports;
  int exitCode = 0;
};

/// Executes every identity in cfg.identities in order. Catalog errors are
/// raised as ConfigError before any identity runs; errors inside an identity
/// become a failed report whose note names the stage.
RunResult run(const RunConfig& cfg);

}  // namespace verify
