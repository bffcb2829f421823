#include <doctest.h>

#include <bit>
#include <stdexcept>

#include "netform/network.hpp"

using namespace netform;

TEST_CASE("neighbors come from the edge set") {
  const Network g(3, {{0, 1}, {0, 2}});
  CHECK(g.neighbors(0) == std::vector<Agent>{1, 2});
  CHECK(g.neighbors(1) == std::vector<Agent>{0});
  CHECK(g.degree(0) == 2);
  CHECK(Network(1).neighbors(0).empty());
  CHECK_THROWS_AS(g.neighbors(3), std::out_of_range);
}

TEST_CASE("edges reject self-loops, duplicates and bad endpoints") {
  Network g(3);
  CHECK_THROWS_AS(g.add_edge(1, 1), std::invalid_argument);
  g.add_edge(0, 2);
  CHECK_THROWS_AS(g.add_edge(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(g.add_edge(0, 3), std::out_of_range);
  CHECK_THROWS_AS(g.remove_edge(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(Network(0), std::invalid_argument);
  CHECK_THROWS_AS(Network(kMaxAgents + 1), std::invalid_argument);
}

TEST_CASE("edge order and rendering are canonical") {
  const Network g(4, {{3, 2}, {1, 0}, {0, 3}});
  const auto es = g.edges();
  REQUIRE(es.size() == 3);
  CHECK(es[0] == Edge(0, 1));
  CHECK(es[1] == Edge(0, 3));
  CHECK(es[2] == Edge(2, 3));
  CHECK(g.to_string() == "{1,2},{1,4},{3,4}");
  CHECK(Network(2).to_string() == "{}");
}

TEST_CASE("pair indices enumerate pairs in order") {
  for (std::size_t n = 2; n <= 8; ++n) {
    const auto pairs = all_pairs(n);
    for (std::size_t k = 0; k < pairs.size(); ++k)
      CHECK(pair_index(n, pairs[k].first, pairs[k].second) == k);
  }
}

TEST_CASE("edge masks round-trip") {
  for (std::uint64_t mask = 0; mask < 64; ++mask) {
    const Network g = network_from_mask(4, mask);
    CHECK(edge_mask(g) == mask);
    CHECK(g.edge_count() == static_cast<std::size_t>(std::popcount(mask)));
  }
  CHECK_THROWS(network_from_mask(3, 8));
}

TEST_CASE("64 agents fit") {
  Network g = Network::complete(kMaxAgents);
  CHECK(g.degree(63) == 63);
  CHECK(g.has_edge(0, 63));
}
