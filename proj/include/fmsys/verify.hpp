#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fmsys/description.hpp"

namespace fmsys {

/// Thresholds used by the property suite.
struct ToleranceProfile {
  std::string name = "default";
  double equality = 1e-12;   // exact linear-algebra identities
  double norm = 1e-9;        // contractivity and energy slacks
  double residual = 1e-6;    // truncated frequency-domain identities
  double series = 1e-8;      // series versus resolvent
};

/// "default" or "loose" (every threshold widened by 1e3). Throws ParseError otherwise.
ToleranceProfile tolerance_profile(const std::string& name);

struct VerifyOptions {
  int level = 6;             // energy, io and symmetrisation checks
  int frequency_level = 20;  // truncation of the output Z-transform
  int points = 3;            // evaluation points / tuples per frequency check
  std::uint64_t seed = 1;    // inputs, initial states and evaluation points
  ToleranceProfile tol;
};

enum class Relation { at_most, at_least };

struct PropertyResult {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  Relation relation = Relation::at_most;
  bool pass = false;
  /// Informational rows are reported but do not affect the exit status.
  bool gating = true;
  std::string note;
};

struct VerifyReport {
  Flavor flavor = Flavor::commutative;
  std::vector<PropertyResult> properties;

  bool all_pass() const;
  nlohmann::json to_json() const;
};

/// Runs the property suite for the description's flavour.
VerifyReport run_verify(const SystemDescription& desc, const VerifyOptions& options);

}  // namespace fmsys
