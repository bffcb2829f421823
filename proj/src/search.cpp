#include "netform/search.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "netform/dynamics.hpp"

namespace netform {

void SearchSpace::validate() const {
  if (n == 0 || n > kMaxEnumeratedAgents) {
    throw std::invalid_argument("search space n must be in [1, " +
                                std::to_string(kMaxEnumeratedAgents) + "]");
  }
  if (alpha_grid.empty() || delta_grid.empty()) {
    throw std::invalid_argument("alpha and delta grids must be nonempty");
  }
  for (const auto& a : alpha_grid)
    if (a < 0 || a >= 1) throw std::invalid_argument("alpha grid value outside [0, 1)");
  for (const auto& d : delta_grid)
    if (d < 0) throw std::invalid_argument("delta grid value is negative");
  if (mode == SearchMode::Grid) {
    if (theta_grid.size() != n) {
      throw std::invalid_argument("theta grid needs one list per agent");
    }
    for (const auto& list : theta_grid) {
      if (list.empty()) throw std::invalid_argument("theta grid list is empty");
      for (const auto& t : list)
        if (t <= 0) throw std::invalid_argument("theta grid value is not positive");
    }
  } else {
    if (theta_min < 0 || theta_max <= theta_min || theta_denominator == 0) {
      throw std::invalid_argument("random theta bounds must satisfy 0 <= min < max");
    }
  }
  for (const auto& g : networks)
    if (g.size() != n) throw std::invalid_argument("candidate network size mismatch");
}

std::vector<Network> enumerate_networks(std::size_t n) {
  if (n == 0 || n > kMaxEnumeratedAgents) {
    throw std::length_error("network enumeration is limited to " +
                            std::to_string(kMaxEnumeratedAgents) + " agents");
  }
  const std::size_t m = n * (n - 1) / 2;
  std::vector<Network> out;
  out.reserve(std::size_t{1} << m);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask)
    out.push_back(network_from_mask(n, mask));
  return out;
}

namespace {

std::uint64_t uniform_below(std::mt19937_64& engine, std::uint64_t count) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % count;
  std::uint64_t r;
  do {
    r = engine();
  } while (r >= limit);
  return r % count;
}

}  // namespace

std::vector<Game> instances_of(const SearchSpace& space, bool* exhausted) {
  space.validate();
  std::vector<Game> out;
  bool truncated = false;

  if (space.mode == SearchMode::Random) {
    std::mt19937_64 engine(space.seed);
    const Rational den(space.theta_denominator);
    mpz_class lo_q = mpz_class(Rational(space.theta_min * den));  // floor, both positive
    const mpz_class hi_q = mpz_class(Rational(space.theta_max * den));
    if (Rational(lo_q) / den <= space.theta_min) lo_q += 1;  // open lower end
    if (hi_q < lo_q) throw std::invalid_argument("no grid points in (theta_min, theta_max]");
    const mpz_class span_q = hi_q - lo_q + 1;
    if (!span_q.fits_ulong_p()) throw std::invalid_argument("theta range too wide");
    const std::uint64_t span = span_q.get_ui();
    for (std::size_t s = 0; s < space.samples; ++s) {
      if (out.size() >= space.max_instances) {
        truncated = true;
        break;
      }
      std::vector<Rational> theta(space.n);
      for (auto& t : theta) {
        const mpz_class numer = lo_q + mpz_class(static_cast<unsigned long>(uniform_below(engine, span)));
        t = Rational(numer, mpz_class(space.theta_denominator));
        t.canonicalize();
      }
      const auto& a = space.alpha_grid[uniform_below(engine, space.alpha_grid.size())];
      const auto& d = space.delta_grid[uniform_below(engine, space.delta_grid.size())];
      out.emplace_back(std::move(theta), a, d);
    }
  } else {
    std::vector<std::size_t> pick(space.n, 0);
    for (const auto& a : space.alpha_grid) {
      std::fill(pick.begin(), pick.end(), 0);
      bool more = true;
      while (more && !truncated) {
        std::vector<Rational> theta(space.n);
        for (std::size_t i = 0; i < space.n; ++i) theta[i] = space.theta_grid[i][pick[i]];
        for (const auto& d : space.delta_grid) {
          if (out.size() >= space.max_instances) {
            truncated = true;
            break;
          }
          out.emplace_back(theta, a, d);
        }
        // Odometer with agent 1 as the slowest digit.
        more = false;
        for (std::size_t i = space.n; i-- > 0;) {
          if (++pick[i] < space.theta_grid[i].size()) {
            more = true;
            break;
          }
          pick[i] = 0;
        }
      }
      if (truncated) break;
    }
  }
  if (exhausted != nullptr) *exhausted = truncated;
  return out;
}

namespace {

struct InstanceOutcome {
  std::vector<CounterexampleRecord> records;
  std::size_t networks = 0;
  std::size_t rejected = 0;
};

template <typename Fn>
SearchResult run_search(const SearchSpace& space, const SearchOptions& options, Fn&& per_instance) {
  bool exhausted = false;
  const auto games = instances_of(space, &exhausted);
  const auto networks = space.networks.empty() ? enumerate_networks(space.n) : space.networks;

  std::vector<InstanceOutcome> outcomes(games.size());
  unsigned workers = options.threads ? options.threads : std::thread::hardware_concurrency();
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(games.size())));
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t g = begin; g < games.size(); g += step)
      outcomes[g] = per_instance(games[g], networks);
  };
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }

  SearchResult result;
  result.instances_evaluated = games.size();
  result.budget_exhausted = exhausted;
  for (auto& o : outcomes) {
    result.networks_evaluated += o.networks;
    result.rejected_by_exact += o.rejected;
    for (auto& r : o.records) result.records.push_back(std::move(r));
  }
  return result;
}

}  // namespace

SearchResult find_prop1_counterexamples(const SearchSpace& space,
                                        const SearchOptions& options) {
  CheckOptions exact_check = options.check;
  exact_check.force_exact = true;
  return run_search(space, options, [&](const Game& game, const std::vector<Network>& networks) {
    InstanceOutcome out;
    for (const Network& g : networks) {
      ++out.networks;
      if (is_locally_complete(g, game.instance().theta()).locally_complete) continue;
      if (!is_pairwise_nash_stable(game, g, options.check).stable) continue;
      auto stability = is_pairwise_nash_stable(game, g, exact_check);
      auto completeness = is_locally_complete(g, std::span<const Rational>(game.theta()));
      if (!stability.stable || completeness.locally_complete) {
        ++out.rejected;
        continue;
      }
      CounterexampleRecord rec{game, g, CounterexampleKind::Prop1,
                               Prop1Evidence{std::move(stability), std::move(completeness)},
                               std::nullopt, true};
      if (space.annotate_reachability) {
        rec.reachable = is_reachable(game, g, space.reach_horizon, options.check);
      }
      out.records.push_back(std::move(rec));
    }
    return out;
  });
}

SearchResult find_lemma2_counterexamples(const SearchSpace& space,
                                         const SearchOptions& options) {
  CheckOptions exact_check = options.check;
  exact_check.force_exact = true;
  return run_search(space, options, [&](const Game& game, const std::vector<Network>& networks) {
    InstanceOutcome out;
    const std::size_t n = game.size();
    const auto& theta = game.theta();
    for (const Network& g : networks) {
      ++out.networks;
      for (Agent i = 0; i < n; ++i) {
        for (Agent j = 0; j < n; ++j) {
          for (Agent k = 0; k < n; ++k) {
            if (i == j || i == k || j == k || !(theta[k] > theta[j])) continue;
            if (g.has_edge(i, j) || g.has_edge(i, k)) continue;
            const auto quick = lemma2_violation(game, g, i, j, k, options.check);
            if (!quick.utility_order_violated && !quick.effort_order_violated) continue;
            auto verified = lemma2_violation(game, g, i, j, k, exact_check);
            if (!verified.utility_order_violated && !verified.effort_order_violated) {
              ++out.rejected;
              continue;
            }
            out.records.push_back({game, g, CounterexampleKind::Lemma2,
                                   Lemma2Evidence{i, j, k, std::move(verified)},
                                   std::nullopt, true});
          }
        }
      }
    }
    return out;
  });
}

VerifyOutcome verify_record(const CounterexampleRecord& record) {
  VerifyOutcome v;
  auto fail = [&](std::string what) {
    v.ok = false;
    v.mismatches.push_back(std::move(what));
  };
  if (!record.exact_verified) fail("record is not marked exact-verified");
  if (record.network.size() != record.game.size()) {
    fail("network size does not match instance");
    return v;
  }
  CheckOptions exact;
  exact.force_exact = true;

  if (record.kind == CounterexampleKind::Prop1) {
    const auto* ev = std::get_if<Prop1Evidence>(&record.evidence);
    if (ev == nullptr) {
      fail("Prop1 record carries Lemma2 evidence");
      return v;
    }
    const auto stability = is_pairwise_nash_stable(record.game, record.network, exact);
    const auto completeness =
        is_locally_complete(record.network, std::span<const Rational>(record.game.theta()));
    if (!stability.stable) fail("network is not pairwise Nash stable: " + describe(*stability.witness));
    if (ev->stability.stable != stability.stable) fail("stability flag does not reproduce");
    if (completeness.locally_complete) fail("network is locally complete");
    if (ev->completeness.locally_complete != completeness.locally_complete) {
      fail("local completeness flag does not reproduce");
    }
    if (ev->completeness.violation != completeness.violation ||
        ev->completeness.missing != completeness.missing) {
      fail("local completeness violation does not reproduce");
    }
  } else {
    const auto* ev = std::get_if<Lemma2Evidence>(&record.evidence);
    if (ev == nullptr) {
      fail("Lemma2 record carries Prop1 evidence");
      return v;
    }
    try {
      const auto r = lemma2_violation(record.game, record.network, ev->i, ev->j, ev->k, exact);
      if (!r.utility_order_violated && !r.effort_order_violated) fail("no ordering is violated");
      if (r.utility_order_violated != ev->report.utility_order_violated) {
        fail("utility ordering flag does not reproduce");
      }
      if (r.effort_order_violated != ev->report.effort_order_violated) {
        fail("effort ordering flag does not reproduce");
      }
      if (ev->report.exact) {
        const auto& a = *ev->report.exact;
        const auto& b = *r.exact;
        if (a.utility_with_j != b.utility_with_j || a.utility_with_k != b.utility_with_k ||
            a.effort_with_j != b.effort_with_j || a.effort_with_k != b.effort_with_k) {
          fail("exact values do not reproduce");
        }
      }
    } catch (const std::exception& e) {
      fail(std::string("precondition failed: ") + e.what());
    }
  }

  if (record.reachable) {
    const Network end = replay(record.game, *record.reachable, exact);
    if (end != record.network) {
      fail("reachability witness ends at " + end.to_string() + " instead of " +
           record.network.to_string());
    }
  }
  return v;
}

SearchSpace canonical_prop1_space() {
  SearchSpace s;
  s.n = 3;
  auto range = [](int lo, int hi) {
    std::vector<Rational> out;
    for (int v = lo; v <= hi; ++v) out.emplace_back(v);
    return out;
  };
  s.theta_grid = {range(16, 24), range(8, 20), range(8, 20)};
  s.alpha_grid = {Rational(1, 3), Rational(1, 2), Rational(2, 3)};
  s.delta_grid = range(0, 20);
  for (int d : {25, 30, 40, 50, 75, 100}) s.delta_grid.emplace_back(d);
  s.annotate_reachability = true;
  s.reach_horizon = 8;
  return s;
}

SearchSpace reference_lemma2_space() {
  SearchSpace s;
  s.n = 5;
  s.theta_grid = {{20}, {10}, {11}, {13}, {19}};
  s.alpha_grid = {Rational(2, 3)};
  s.delta_grid = {75};
  s.networks = {Network(5, {{0, 1}, {2, 3}})};
  return s;
}

}  // namespace netform
