#include <doctest.h>

#include "netform/dynamics.hpp"
#include "netform/model.hpp"
#include "oracles.hpp"

using namespace netform;

namespace {

const Game kFixture({16, 14, 9}, Rational(1, 3), 10);
const Network kFixtureNet(3, {{0, 1}, {0, 2}});

// Agent 1 (type 20) linked to types 15 and 1. Dropping the low link gains
// 187/25, dropping both gains 162/25, dropping the other loses.
const Game kSeverGame({20, 15, 1}, Rational(2, 3), 39);
const Network kSeverNet(3, {{0, 1}, {0, 2}});

CheckOptions exact_mode() {
  CheckOptions o;
  o.force_exact = true;
  return o;
}

}  // namespace

TEST_CASE("best profitable severance") {
  CHECK_FALSE(best_profitable_severance(kFixture, Network(3), 0));
  for (Agent i = 0; i < 3; ++i) CHECK_FALSE(best_profitable_severance(kFixture, kFixtureNet, i));

  const auto s = best_profitable_severance(kSeverGame, kSeverNet, 0);
  REQUIRE(s);
  CHECK(s->links == std::vector<Edge>{{0, 2}});
  CHECK(s->gain == doctest::Approx(7.48));

  const auto x = best_profitable_severance(kSeverGame, kSeverNet, 0, exact_mode());
  REQUIRE(x);
  CHECK(x->links == std::vector<Edge>{{0, 2}});
  REQUIRE(x->exact_gain);
  CHECK(*x->exact_gain == Rational(187, 25));

  // Independent check of the ranking.
  const auto base = exact::payoffs(kSeverGame, kSeverNet)[0];
  CHECK(exact::payoffs(kSeverGame, Network(3))[0] - base == Rational(162, 25));
  CHECK(exact::payoffs(kSeverGame, Network(3, {{0, 2}}))[0] - base < 0);
}

TEST_CASE("severance ties pick the lexicographically smallest subset") {
  // Symmetric neighbors: dropping either link gains the same amount.
  const Game g({20, 1, 1}, Rational(2, 3), 1);
  const Network net(3, {{0, 1}, {0, 2}});
  const auto s = best_profitable_severance(g, net, 0, exact_mode());
  REQUIRE(s);
  const auto base = exact::payoffs(g, net)[0];
  const Rational single = exact::payoffs(g, Network(3, {{0, 2}}))[0] - base;
  const Rational both = exact::payoffs(g, Network(3))[0] - base;
  if (single >= both) {
    CHECK(s->links == std::vector<Edge>{{0, 1}});
  } else {
    CHECK(s->links == std::vector<Edge>{{0, 1}, {0, 2}});
  }
}

TEST_CASE("mutual link benefit") {
  CHECK(mutual_link_beneficial(kFixture, Network(3), 0, 1));
  CHECK(mutual_link_beneficial(kFixture, Network(3, {{0, 1}}), 0, 2));
  CHECK_FALSE(mutual_link_beneficial(kFixture, kFixtureNet, 1, 2));
  CHECK_THROWS(mutual_link_beneficial(kFixture, kFixtureNet, 0, 1));
  CHECK_THROWS(mutual_link_beneficial(kFixture, kFixtureNet, 1, 1));
}

TEST_CASE("formation step") {
  SUBCASE("empty network, profitable pair") {
    const auto r = formation_step(kFixture, Network(3), {0, 1});
    CHECK(std::holds_alternative<LinkFormed>(r.event.action));
    CHECK(r.network == Network(3, {{0, 1}}));
  }
  SUBCASE("severance ends the round even when the link would form") {
    // Agent 1 would rather drop its low neighbor, yet linking to agent 3
    // on top of the current network is mutually beneficial.
    const Game g({1, 1, 1, 5}, Rational(2, 3), 1);
    const Network net(4, {{0, 1}, {0, 3}});
    REQUIRE(best_profitable_severance(g, net, 0));
    REQUIRE(mutual_link_beneficial(g, net, 0, 2));
    const auto r = formation_step(g, net, {0, 2}, 4);
    const auto* s = std::get_if<Severed>(&r.event.action);
    REQUIRE(s);
    CHECK(s->agent == 0);
    CHECK(r.event.t == 4);
    CHECK_FALSE(r.network.has_edge(0, 2));
    CHECK(r.network == net.without_edges(s->links));
  }
  SUBCASE("linked pair without profitable severance") {
    const auto r = formation_step(kFixture, kFixtureNet, {0, 1});
    CHECK(std::holds_alternative<NoChange>(r.event.action));
    CHECK(r.network == kFixtureNet);
  }
}

TEST_CASE("formation runs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto tr = run_formation(kFixture, seed, 500);
    REQUIRE(tr.reached);
    CHECK(tr.reached->network == kFixtureNet);
    CHECK(tr.networks.size() == tr.reached->time + 1);
    CHECK(tr.networks.front() == Network(3));
  }

  const auto lone = run_formation(Game({5}, Rational(1, 2), 1), 3, 10);
  REQUIRE(lone.reached);
  CHECK(lone.reached->time == 0);
  CHECK(lone.events.empty());

  CHECK(run_formation(kFixture, 99, 200) == run_formation(kFixture, 99, 200));
  CHECK_THROWS(run_formation(kFixture, 1, 0));
}

TEST_CASE("every trajectory step is an improvement for the movers") {
  const auto cases = testing::corpus(40, 51, 5);
  for (const auto& c : cases) {
    const auto tr = run_formation(c.game, 7, 60);
    for (const auto& e : tr.events) {
      const auto before = exact::payoffs(c.game, tr.networks[e.t]);
      const auto after = exact::payoffs(c.game, tr.networks[e.t + 1]);
      if (const auto* s = std::get_if<Severed>(&e.action)) {
        CHECK(after[s->agent] > before[s->agent]);
      } else if (const auto* l = std::get_if<LinkFormed>(&e.action)) {
        CHECK(after[l->i] >= before[l->i]);
        CHECK(after[l->j] >= before[l->j]);
        CHECK((after[l->i] > before[l->i] || after[l->j] > before[l->j]));
      } else {
        CHECK(tr.networks[e.t] == tr.networks[e.t + 1]);
      }
    }
    if (tr.reached) CHECK(testing::brute_force_stable(c.game, tr.reached->network));
  }
}

TEST_CASE("pair sampler is uniform enough and reproducible") {
  PairSampler a(4, 17), b(4, 17);
  std::vector<int> counts(6, 0);
  for (int k = 0; k < 6000; ++k) {
    const Edge e = a.next();
    CHECK(e == b.next());
    ++counts[pair_index(4, e.first, e.second)];
  }
  for (int c : counts) CHECK(c > 850);
}

TEST_CASE("reachability") {
  const auto w = is_reachable(kFixture, kFixtureNet, 8);
  REQUIRE(w);
  CHECK(*w == std::vector<Edge>{{0, 1}, {0, 2}});
  CHECK(replay(kFixture, *w) == kFixtureNet);

  CHECK_FALSE(is_reachable(kFixture, Network(3, {{0, 1}}), 8));
  CHECK_FALSE(is_reachable(kFixture, Network(3), 8));
  CHECK_FALSE(is_reachable(kFixture, kFixtureNet, 1));
  CHECK_THROWS_AS(is_reachable(Game(std::vector<Rational>(7, 1), Rational(1, 2), 1), Network(7), 4),
                  std::length_error);

  // Stable empty network is reachable with no moves.
  const Game apart({30, 1}, Rational(1, 2), 0);
  REQUIRE(is_pairwise_nash_stable(apart, Network(2)).stable);
  const auto none = is_reachable(apart, Network(2), 4);
  REQUIRE(none);
  CHECK(none->empty());
}

TEST_CASE("reachability witnesses replay") {
  const auto cases = testing::corpus(30, 52, 4);
  for (const auto& c : cases) {
    const auto w = is_reachable(c.game, c.network, 10);
    if (!w) continue;
    CHECK(replay(c.game, *w) == c.network);
    CHECK(is_pairwise_nash_stable(c.game, c.network).stable);
  }
}
