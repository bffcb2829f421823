#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "netform/search.hpp"

namespace netform {

struct ReplicationItem {
  std::string section;
  std::string label;
  /// Which reference figure or statement the expected value comes from.
  std::string source;
  std::string expected;
  std::string computed;
  std::optional<double> abs_error;
  std::optional<double> tolerance;
  bool pass = false;
  /// Informational entries never fail the report.
  bool informational = false;
};

struct ReplicationReport {
  std::vector<ReplicationItem> items;
  /// Every exact-verified hit of the canonical grid, in canonical order.
  std::vector<CounterexampleRecord> prop1_hits;
  /// Index into prop1_hits of the fixture reached via (1,2) then (1,3).
  std::optional<std::size_t> canonical_fixture;
  double prop1_seconds = 0.0;

  bool passed() const;
};

/// First record on {1,2},{1,3} whose reachability witness is (1,2),(1,3).
std::optional<std::size_t> find_canonical_fixture(const std::vector<CounterexampleRecord>& records);

/// Recomputes the reference values: the two-pair equilibrium, the outside
/// agent's two link choices, both partner-monotonicity checks, the
/// stable-but-not-locally-complete grid search and its formation path.
ReplicationReport replicate(const SearchOptions& options = {});

std::string format_report(const ReplicationReport& report);
nlohmann::json to_json(const ReplicationReport& report);

}  // namespace netform
