#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "netform/exact.hpp"
#include "netform/network.hpp"
#include "netform/stability.hpp"

namespace netform {

/// Labeled networks are enumerated up to this many agents.
inline constexpr std::size_t kMaxEnumeratedAgents = 6;

enum class SearchMode { Grid, Random };

/// Parameter space for the counterexample miners. Grid mode takes the
/// cartesian product alpha x theta_1 x ... x theta_n x delta in that nesting
/// order; random mode draws `samples` instances from a seeded engine.
struct SearchSpace {
  std::size_t n = 0;
  SearchMode mode = SearchMode::Grid;
  std::vector<std::vector<Rational>> theta_grid;
  std::vector<Rational> alpha_grid;
  std::vector<Rational> delta_grid;
  std::size_t max_instances = 1'000'000;

  // Random mode: theta_i uniform on multiples of 1/theta_denominator in
  // (theta_min, theta_max]; alpha and delta drawn from their grids.
  Rational theta_min = 0;
  Rational theta_max = 100;
  unsigned theta_denominator = 100;
  std::uint64_t seed = 0;
  std::size_t samples = 0;

  /// Candidate networks; every labeled network on n agents when empty.
  std::vector<Network> networks;

  bool annotate_reachability = false;
  std::size_t reach_horizon = 32;

  /// Throws std::invalid_argument when a grid value or guard is violated.
  void validate() const;
};

enum class CounterexampleKind { Prop1, Lemma2 };

struct Prop1Evidence {
  StabilityReport stability;
  LocalCompletenessReport completeness;
};

struct Lemma2Evidence {
  Agent i = 0;
  Agent j = 0;
  Agent k = 0;
  Lemma2Report report;
};

/// A network that is stable but not locally complete (Prop1), or a
/// partner-choice triple whose higher-type partner is not strictly better
/// (Lemma2). For Lemma2 records `network` is the base network.
struct CounterexampleRecord {
  Game game;
  Network network;
  CounterexampleKind kind = CounterexampleKind::Prop1;
  std::variant<Prop1Evidence, Lemma2Evidence> evidence;
  std::optional<std::vector<Edge>> reachable;
  bool exact_verified = false;
};

struct SearchResult {
  std::vector<CounterexampleRecord> records;
  std::size_t instances_evaluated = 0;
  std::size_t networks_evaluated = 0;
  /// Float hits that exact re-verification rejected.
  std::size_t rejected_by_exact = 0;
  bool budget_exhausted = false;
};

struct SearchOptions {
  CheckOptions check;
  /// Worker threads; 0 means hardware concurrency.
  unsigned threads = 0;
};

/// All 2^(n(n-1)/2) labeled networks, bit b of the index set for the b-th
/// pair in canonical order. Throws std::length_error above
/// kMaxEnumeratedAgents.
std::vector<Network> enumerate_networks(std::size_t n);

/// Instances of the space in canonical order, truncated at max_instances.
/// Sets `exhausted` when the truncation dropped instances.
std::vector<Game> instances_of(const SearchSpace& space, bool* exhausted = nullptr);

SearchResult find_prop1_counterexamples(const SearchSpace& space,
                                        const SearchOptions& options = {});

SearchResult find_lemma2_counterexamples(const SearchSpace& space,
                                         const SearchOptions& options = {});

struct VerifyOutcome {
  bool ok = true;
  std::vector<std::string> mismatches;
};

/// Recomputes every claim of the record in exact arithmetic.
VerifyOutcome verify_record(const CounterexampleRecord& record);

/// Three-agent grid around a high type linked to two lower types.
SearchSpace canonical_prop1_space();

/// Two disjoint pairs (20,10) and (11,13) with an outside agent of type 19,
/// alpha 2/3, delta 75, base network {1,2},{3,4}.
SearchSpace reference_lemma2_space();

}  // namespace netform
