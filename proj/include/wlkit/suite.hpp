#pragma once

// The separation and property batteries, runnable from the CLI and from the
// acceptance test binary.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "wlkit/refinement.hpp"

namespace wlkit {

inline constexpr const char* kToolVersion = "wlkit 1.0.0";

struct SuiteOptions {
  unsigned jobs = 0;
  Fault fault = Fault::None;
  std::uint64_t seed = 20230907;
};

struct Check {
  std::string name;
  std::string expected;
  std::string actual;
  bool ok = false;
};

struct BatteryReport {
  int id = 0;
  std::string name;
  std::vector<Check> checks;
  nlohmann::json summary = nlohmann::json::object();
  double millis = 0;
  double limit_seconds = 0;

  bool passed() const;
  bool within_limit() const { return millis <= limit_seconds * 1000.0; }
};

struct SuiteReport {
  SuiteOptions options;
  std::vector<BatteryReport> batteries;

  bool passed() const;
  /// Verdict part only: identical across runs with the same options.
  nlohmann::json verdicts() const;
  /// Per-battery wall time and limit.
  nlohmann::json timings() const;
  nlohmann::json to_json() const;
};

/// Battery ids 1..8; an empty selection runs all of them.
inline constexpr int kBatteryCount = 8;
std::string battery_name(int id);
BatteryReport run_battery(int id, const SuiteOptions& options);
SuiteReport run_suite(const SuiteOptions& options, const std::vector<int>& only = {});

Fault parse_fault(const std::string& name);
std::string to_string(Fault fault);

}  // namespace wlkit
