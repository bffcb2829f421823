#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "netform/exact.hpp"
#include "netform/network.hpp"

namespace netform {

/// Degree above which severance subsets are not enumerated.
inline constexpr std::size_t kMaxSeverDegree = 16;

/// Float decisions with |margin| below this are re-decided exactly.
inline constexpr double kDefaultEscalation = 1e-6;

/// Two agents forming link {i,j}. In a witness, i is the agent that gains
/// strictly.
struct AddLink {
  Agent i = 0;
  Agent j = 0;
  friend bool operator==(const AddLink&, const AddLink&) = default;
};

/// Agent severs a nonempty subset of its own links.
struct Sever {
  Agent agent = 0;
  std::vector<Edge> links;
  friend bool operator==(const Sever&, const Sever&) = default;
};

using Deviation = std::variant<AddLink, Sever>;

/// Network after applying a deviation.
Network apply(const Network& network, const Deviation& deviation);

/// 1-based human-readable form, e.g. "add {2,3}" or "sever 1: {1,2},{1,3}".
std::string describe(const Deviation& deviation);

struct CheckOptions {
  /// Escalation threshold; 0 disables escalation (pure float).
  double eps = kDefaultEscalation;
  /// Decide everything in exact arithmetic.
  bool force_exact = false;
};

/// A comparison whose float sign differed from its exact sign. Always below
/// the escalation threshold, otherwise it would not have been re-decided.
struct NearTie {
  Deviation deviation;
  Agent agent = 0;
  double float_margin = 0.0;
  int exact_sign = 0;
};

struct StabilityReport {
  bool stable = true;
  std::optional<Deviation> witness;
  /// Utility change of the witness agent (AddLink: endpoint i).
  double delta_i = 0.0;
  /// Utility change of the partner for an AddLink witness.
  double delta_j = 0.0;
  /// Exact deltas when the witness was decided exactly.
  std::optional<Rational> exact_delta_i;
  std::optional<Rational> exact_delta_j;
  std::size_t deviations_checked = 0;
  std::size_t escalations = 0;
  /// Smallest |float utility change| among the comparisons that decided the
  /// verdict; +inf when no deviation exists.
  double min_margin = 0.0;
  std::vector<NearTie> near_ties;
};

struct LocalCompletenessReport {
  bool locally_complete = true;
  /// (i, j, k): {i,j} is an edge with theta_i <= theta_k <= theta_j and k
  /// misses a link inside the interval.
  std::optional<std::array<Agent, 3>> violation;
  /// The unlinked pair inside the interval.
  std::optional<Edge> missing;
};

/// Agents whose types lie in the closed interval spanned by theta_i and
/// theta_j, ascending by index. Includes i and j.
std::vector<Agent> interval_agents(std::span<const double> theta, Agent i, Agent j);
std::vector<Agent> interval_agents(std::span<const Rational> theta, Agent i, Agent j);

LocalCompletenessReport is_locally_complete(const Network& network,
                                            std::span<const double> theta);
/// Exact-type variant; distinct rationals never collapse to one double.
LocalCompletenessReport is_locally_complete(const Network& network,
                                            std::span<const Rational> theta);

/// Calls `visit` for each deviation in canonical order (additions for
/// non-edges i<j, then severances by agent and binary-counting subset);
/// stops when `visit` returns false. Throws std::length_error if some
/// degree exceeds kMaxSeverDegree.
void for_each_deviation(const Network& network,
                        const std::function<bool(const Deviation&)>& visit);

std::vector<Deviation> enumerate_deviations(const Network& network);

/// Pairwise Nash stability under re-equilibrated payoffs. A non-edge blocks
/// when one endpoint gains strictly and the other does not lose; a
/// severance blocks when it is strictly profitable. The first blocking
/// deviation in canonical order is the witness.
StabilityReport is_pairwise_nash_stable(const Game& game, const Network& network,
                                        const CheckOptions& options = {});

struct Lemma2Report {
  bool utility_order_violated = false;
  bool effort_order_violated = false;
  double utility_with_j = 0.0;
  double utility_with_k = 0.0;
  double effort_with_j = 0.0;
  double effort_with_k = 0.0;
  /// Exact values, filled when the check ran exactly or escalated.
  struct Exact {
    Rational utility_with_j, utility_with_k, effort_with_j, effort_with_k;
  };
  std::optional<Exact> exact;
};

/// Compares agent i linking to j against linking to k (theta_k > theta_j),
/// both re-equilibrated, and flags each strict ordering claimed for the
/// higher-type partner that fails. Throws std::invalid_argument on
/// precondition violations.
Lemma2Report lemma2_violation(const Game& game, const Network& network, Agent i,
                              Agent j, Agent k, const CheckOptions& options = {});

struct MyopicPreference {
  Agent preferred = 0;
  double utility_with_j = 0.0;
  double utility_with_k = 0.0;
  double frozen_effort_j = 0.0;
  double frozen_effort_k = 0.0;
};

/// Which of j, k agent i prefers when everyone else keeps their current
/// equilibrium effort and i best-responds to the new neighborhood. Ties go
/// to the lower index.
MyopicPreference myopic_link_preference(const Game& game, const Network& network,
                                        Agent i, Agent j, Agent k,
                                        const CheckOptions& options = {});

}  // namespace netform
