#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "fmsys/description.hpp"
#include "fmsys/verify.hpp"

namespace fmsys {

/// Input sequence selector: "zero", "delta" (every input component equal to 1 at the origin),
/// "random" / "random:M" (seeded Gaussian entries up to level M, default 2), or a JSON file
/// holding {"entries": [{"index": [...] | "word": [...], "value": V}, ...]}.
struct InputSpec {
  std::string text = "zero";
};

/// Initial state selector: "zero", "unit" (first basis vector), "random", an inline JSON
/// vector, or a path to a JSON file holding one.
struct StateSpec {
  std::string text = "zero";
};

struct SimulateRequest {
  int level = 4;
  std::uint64_t seed = 1;
  InputSpec input;
  StateSpec x0;
};

struct SimulateResult {
  nlohmann::json report;
  /// Rows "table,index,value" for the per-level energy tables.
  std::string csv;
};

/// Simulates to level + 1 and reports the trajectory up to `level` together with the
/// per-level energy slacks and cumulative norms.
SimulateResult run_simulate(const SystemDescription& desc, const SimulateRequest& request);

struct TransferRequest {
  /// {"points": [{"z": [c_1, ..., c_d]} | {"T": [M_1, ..., M_d]}, ...]}
  nlohmann::json points;
  /// Series comparison: nullopt = off, -1 = choose the level from the tail bound.
  std::optional<int> series_level;
};

/// Evaluates F and W at each point. Invalid points yield an {"index", "error"} record
/// instead of aborting the run.
nlohmann::json run_transfer(const SystemDescription& desc, const TransferRequest& request);

/// Exit status convention shared by the CLI.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;

}  // namespace fmsys
