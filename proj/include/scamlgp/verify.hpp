#pragma once

#include <string>
#include <vector>

namespace scamlgp {

// Result of one named invariant suite.
struct CheckReport {
  std::string name;
  bool passed = false;
  double observed = 0.0;   // suite-specific: max error, min eigenvalue, time ratio
  double threshold = 0.0;
  double elapsed_seconds = 0.0;
  std::string details;     // per-config notes; on failure, the first failing setup
};

// Runs one suite ("theorem1", "eq9", "psd", "gradients", "scaling") or every
// suite ("all"). Seeds are fixed, so reports are reproducible. Throws
// ConfigError on an unknown suite name.
std::vector<CheckReport> run_verify(const std::string& which);

}  // namespace scamlgp
