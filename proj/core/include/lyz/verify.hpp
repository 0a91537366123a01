#pragma once

// Self-check suite behind `lyz verify`: oracle comparisons and structural
// identities at desk scale, with a canonical JSON report and fingerprint.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lyz {

struct VerifyOptions {
  bool quick = false;
  std::uint64_t seed = 1;
  unsigned workers = 0;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  bool quick = false;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  bool all_passed = false;
  /// FNV-1a of the canonical JSON body (everything except the hash itself).
  std::string hash;

  std::string to_json() const;
};

VerifyReport run_verification(const VerifyOptions& options);

}  // namespace lyz
