#include "netform/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "netform/compare.hpp"

namespace netform {

std::optional<Severance> best_profitable_severance(const Game& game,
                                                   const Network& network, Agent i,
                                                   const CheckOptions& options) {
  const auto links = network.links_of(i);
  if (links.empty()) return std::nullopt;
  if (links.size() > kMaxSeverDegree) {
    throw std::length_error("degree exceeds the severance enumeration guard");
  }
  UtilityComparer cmp(game, network, options);
  std::optional<Rational> exact_base;
  auto exact_gain = [&](Severance& s) -> const Rational& {
    if (!s.exact_gain) {
      if (!exact_base) exact_base = exact::payoffs(game, network)[i];
      s.exact_gain = exact::payoffs(game, network.without_edges(s.links))[i] - *exact_base;
    }
    return *s.exact_gain;
  };

  std::optional<Severance> best;
  const std::uint32_t subsets = std::uint32_t{1} << links.size();
  for (std::uint32_t mask = 1; mask < subsets; ++mask) {
    Severance s;
    for (std::size_t b = 0; b < links.size(); ++b)
      if ((mask >> b) & 1U) s.links.push_back(links[b]);
    const auto d = cmp.deltas(network.without_edges(s.links), {i})[0];
    if (d.sign <= 0) continue;
    s.gain = d.exact ? to_double(*d.exact) : d.value;
    s.exact_gain = d.exact;
    if (!best) {
      best = std::move(s);
      continue;
    }
    int order;
    const double diff = s.gain - best->gain;
    if (options.force_exact || std::abs(diff) < options.eps) {
      order = sign_of(Rational(exact_gain(s) - exact_gain(*best)));
    } else {
      order = sign_of(diff);
    }
    if (order > 0 || (order == 0 && s.links < best->links)) best = std::move(s);
  }
  return best;
}

bool mutual_link_beneficial(const Game& game, const Network& network, Agent i,
                            Agent j, const CheckOptions& options) {
  if (i == j) throw std::invalid_argument("a link needs two distinct agents");
  if (network.has_edge(i, j)) throw std::invalid_argument("link already present");
  UtilityComparer cmp(game, network, options);
  const auto ds = cmp.deltas(network.with_edge(i, j), {i, j});
  return ds[0].sign >= 0 && ds[1].sign >= 0 && (ds[0].sign > 0 || ds[1].sign > 0);
}

StepResult formation_step(const Game& game, const Network& network, Edge pair,
                          std::size_t t, const CheckOptions& options) {
  if (pair.first == pair.second) throw std::invalid_argument("pair needs two distinct agents");
  if (pair.second >= network.size()) throw std::out_of_range("agent index out of range");
  for (Agent a : {pair.first, pair.second}) {
    if (auto s = best_profitable_severance(game, network, a, options)) {
      Network next = network.without_edges(s->links);
      return {std::move(next), {t, pair, Severed{a, s->links}}};
    }
  }
  if (!network.has_edge(pair.first, pair.second) &&
      mutual_link_beneficial(game, network, pair.first, pair.second, options)) {
    return {network.with_edge(pair.first, pair.second),
            {t, pair, LinkFormed{pair.first, pair.second}}};
  }
  return {network, {t, pair, NoChange{}}};
}

PairSampler::PairSampler(std::size_t n, std::uint64_t seed)
    : pairs_(all_pairs(n)), engine_(seed) {}

Edge PairSampler::next() {
  if (pairs_.empty()) throw std::logic_error("no pairs to sample");
  const std::uint64_t count = pairs_.size();
  // Largest multiple of count representable; draws above it are rejected.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % count;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return pairs_[r % count];
}

Trajectory run_formation(const Game& game, std::uint64_t seed, std::size_t t_max,
                         const CheckOptions& options) {
  if (t_max < 1) throw std::invalid_argument("t_max must be at least 1");
  Trajectory tr;
  tr.seed = seed;
  tr.networks.emplace_back(game.size());
  if (is_pairwise_nash_stable(game, tr.networks.back(), options).stable) {
    tr.reached = Reached{tr.networks.back(), 0};
    return tr;
  }
  PairSampler sampler(game.size(), seed);
  for (std::size_t t = 0; t < t_max; ++t) {
    auto step = formation_step(game, tr.networks.back(), sampler.next(), t, options);
    const bool changed = step.network != tr.networks.back();
    tr.events.push_back(std::move(step.event));
    tr.networks.push_back(std::move(step.network));
    // An unchanged network keeps its previous (unstable) verdict.
    if (changed && is_pairwise_nash_stable(game, tr.networks.back(), options).stable) {
      tr.reached = Reached{tr.networks.back(), t + 1};
      break;
    }
  }
  return tr;
}

std::optional<std::vector<Edge>> is_reachable(const Game& game, const Network& target,
                                              std::size_t horizon,
                                              const CheckOptions& options) {
  const std::size_t n = game.size();
  if (n > kMaxReachAgents) {
    throw std::length_error("exhaustive reachability is limited to " +
                            std::to_string(kMaxReachAgents) + " agents");
  }
  if (target.size() != n) throw std::invalid_argument("target network size mismatch");
  if (!is_pairwise_nash_stable(game, target, options).stable) return std::nullopt;

  const std::uint64_t goal = edge_mask(target);
  if (goal == 0) return std::vector<Edge>{};

  struct Visit {
    std::uint64_t parent;
    Edge pair;
    std::size_t depth;
  };
  std::unordered_map<std::uint64_t, Visit> seen;
  seen.emplace(0, Visit{0, {}, 0});
  std::deque<std::uint64_t> frontier{0};
  const auto pairs = all_pairs(n);

  while (!frontier.empty()) {
    const std::uint64_t state = frontier.front();
    frontier.pop_front();
    const std::size_t depth = seen.at(state).depth;
    if (depth >= horizon) continue;
    const Network current = network_from_mask(n, state);
    for (const Edge& p : pairs) {
      const auto step = formation_step(game, current, p, depth, options);
      const std::uint64_t next = edge_mask(step.network);
      if (seen.contains(next)) continue;
      seen.emplace(next, Visit{state, p, depth + 1});
      if (next == goal) {
        std::vector<Edge> path;
        for (std::uint64_t s = next; s != 0;) {
          const Visit& v = seen.at(s);
          path.push_back(v.pair);
          s = v.parent;
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      frontier.push_back(next);
    }
  }
  return std::nullopt;
}

Network replay(const Game& game, const std::vector<Edge>& pairs,
               const CheckOptions& options) {
  Network g(game.size());
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    g = formation_step(game, g, pairs[t], t, options).network;
  }
  return g;
}

}  // namespace netform
