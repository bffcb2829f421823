#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "netform/exact.hpp"
#include "netform/network.hpp"
#include "netform/stability.hpp"

namespace netform {

/// Exhaustive reachability is only attempted up to this many agents.
inline constexpr std::size_t kMaxReachAgents = 6;

struct Severance {
  std::vector<Edge> links;
  double gain = 0.0;
  std::optional<Rational> exact_gain;
};

/// The strictly profitable severance of i with the largest gain, ties to the
/// lexicographically smallest link subset. Empty when none is profitable.
std::optional<Severance> best_profitable_severance(const Game& game,
                                                   const Network& network, Agent i,
                                                   const CheckOptions& options = {});

/// Both endpoints weakly gain from adding {i,j} and at least one strictly.
bool mutual_link_beneficial(const Game& game, const Network& network, Agent i,
                            Agent j, const CheckOptions& options = {});

struct NoChange {
  friend bool operator==(const NoChange&, const NoChange&) = default;
};
struct Severed {
  Agent agent = 0;
  std::vector<Edge> links;
  friend bool operator==(const Severed&, const Severed&) = default;
};
struct LinkFormed {
  Agent i = 0;
  Agent j = 0;
  friend bool operator==(const LinkFormed&, const LinkFormed&) = default;
};
using FormationAction = std::variant<NoChange, Severed, LinkFormed>;

struct FormationEvent {
  std::size_t t = 0;
  Edge pair;
  FormationAction action;
  friend bool operator==(const FormationEvent&, const FormationEvent&) = default;
};

struct StepResult {
  Network network;
  FormationEvent event;
};

/// One round for the selected pair. A profitable severance by the lower
/// index, then the higher, ends the round; otherwise the link forms if it
/// is absent and mutually beneficial.
StepResult formation_step(const Game& game, const Network& network, Edge pair,
                          std::size_t t = 0, const CheckOptions& options = {});

struct Reached {
  Network network;
  std::size_t time = 0;
  friend bool operator==(const Reached&, const Reached&) = default;
};

struct Trajectory {
  std::uint64_t seed = 0;
  /// G_0, G_1, ... ; networks[t+1] is the result of events[t].
  std::vector<Network> networks;
  std::vector<FormationEvent> events;
  std::optional<Reached> reached;
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Uniform draws over unordered pairs. Uses rejection sampling on the raw
/// engine output so sequences do not depend on the standard library.
class PairSampler {
 public:
  PairSampler(std::size_t n, std::uint64_t seed);
  Edge next();

 private:
  std::vector<Edge> pairs_;
  std::mt19937_64 engine_;
};

/// Runs the formation process from the empty network until it rests at a
/// pairwise Nash stable network or t_max rounds have been played.
Trajectory run_formation(const Game& game, std::uint64_t seed, std::size_t t_max,
                         const CheckOptions& options = {});

/// Shortest pair-selection sequence (breadth-first, pairs in canonical
/// order) leading from the empty network to `target` within `horizon`
/// rounds. Empty optional when the target is not stable or not reached.
/// Throws std::length_error above kMaxReachAgents.
std::optional<std::vector<Edge>> is_reachable(const Game& game, const Network& target,
                                              std::size_t horizon,
                                              const CheckOptions& options = {});

/// Applies formation_step along `pairs` starting from the empty network.
Network replay(const Game& game, const std::vector<Edge>& pairs,
               const CheckOptions& options = {});

}  // namespace netform
