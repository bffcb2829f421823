#include "netform/network.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace netform {

Network::Network(std::size_t n) : adjacency_(n, 0) {
  if (n == 0 || n > kMaxAgents) {
    throw std::invalid_argument("network size must be in [1, " +
                                std::to_string(kMaxAgents) + "], got " +
                                std::to_string(n));
  }
}

Network::Network(std::size_t n, const std::vector<Edge>& edges) : Network(n) {
  for (const Edge& e : edges) add_edge(e.first, e.second);
}

Network Network::complete(std::size_t n) {
  Network g(n);
  for (Agent i = 0; i < n; ++i)
    for (Agent j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

void Network::check_agent(Agent i) const {
  if (i >= adjacency_.size()) {
    throw std::out_of_range("agent index " + std::to_string(i + 1) +
                            " out of range [1, " +
                            std::to_string(adjacency_.size()) + "]");
  }
}

std::size_t Network::edge_count() const {
  std::size_t twice = 0;
  for (auto row : adjacency_) twice += static_cast<std::size_t>(std::popcount(row));
  return twice / 2;
}

bool Network::has_edge(Agent i, Agent j) const {
  check_agent(i);
  check_agent(j);
  return (adjacency_[i] >> j) & 1U;
}

void Network::add_edge(Agent i, Agent j) {
  check_agent(i);
  check_agent(j);
  if (i == j) {
    throw std::invalid_argument("self-loop on agent " + std::to_string(i + 1));
  }
  if (has_edge(i, j)) {
    throw std::invalid_argument("duplicate edge {" + std::to_string(i + 1) +
                                "," + std::to_string(j + 1) + "}");
  }
  adjacency_[i] |= std::uint64_t{1} << j;
  adjacency_[j] |= std::uint64_t{1} << i;
}

void Network::remove_edge(Agent i, Agent j) {
  if (!has_edge(i, j)) {
    throw std::invalid_argument("edge {" + std::to_string(i + 1) + "," +
                                std::to_string(j + 1) + "} not present");
  }
  adjacency_[i] &= ~(std::uint64_t{1} << j);
  adjacency_[j] &= ~(std::uint64_t{1} << i);
}

Network Network::with_edge(Agent i, Agent j) const {
  Network g = *this;
  g.add_edge(i, j);
  return g;
}

Network Network::without_edges(const std::vector<Edge>& edges) const {
  Network g = *this;
  for (const Edge& e : edges) g.remove_edge(e.first, e.second);
  return g;
}

std::vector<Agent> Network::neighbors(Agent i) const {
  check_agent(i);
  std::vector<Agent> out;
  for (std::uint64_t m = adjacency_[i]; m != 0; m &= m - 1)
    out.push_back(static_cast<Agent>(std::countr_zero(m)));
  return out;
}

std::size_t Network::degree(Agent i) const {
  check_agent(i);
  return static_cast<std::size_t>(std::popcount(adjacency_[i]));
}

std::size_t Network::max_degree() const {
  std::size_t best = 0;
  for (auto row : adjacency_) {
    best = std::max(best, static_cast<std::size_t>(std::popcount(row)));
  }
  return best;
}

std::uint64_t Network::neighbor_mask(Agent i) const {
  check_agent(i);
  return adjacency_[i];
}

std::vector<Edge> Network::links_of(Agent i) const {
  std::vector<Edge> out;
  for (Agent j : neighbors(i)) out.emplace_back(i, j);
  return out;
}

std::vector<Edge> Network::edges() const {
  std::vector<Edge> out;
  for (Agent i = 0; i < size(); ++i)
    for (Agent j : neighbors(i))
      if (i < j) out.emplace_back(i, j);
  return out;
}

std::string Network::to_string() const {
  const auto es = edges();
  if (es.empty()) return "{}";
  std::ostringstream os;
  for (std::size_t k = 0; k < es.size(); ++k) {
    if (k) os << ',';
    os << '{' << es[k].first + 1 << ',' << es[k].second + 1 << '}';
  }
  return os.str();
}

std::size_t pair_index(std::size_t n, Agent i, Agent j) {
  if (i > j) std::swap(i, j);
  if (i == j || j >= n) throw std::invalid_argument("invalid pair");
  // pairs before row i: sum_{r<i} (n-1-r)
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

std::vector<Edge> all_pairs(std::size_t n) {
  std::vector<Edge> out;
  out.reserve(n * (n - 1) / 2);
  for (Agent i = 0; i < n; ++i)
    for (Agent j = i + 1; j < n; ++j) out.emplace_back(i, j);
  return out;
}

std::uint64_t edge_mask(const Network& network) {
  const std::size_t n = network.size();
  if (n * (n - 1) / 2 > 64) throw std::length_error("too many pairs for a 64-bit edge mask");
  std::uint64_t mask = 0;
  for (const Edge& e : network.edges()) mask |= std::uint64_t{1} << pair_index(n, e.first, e.second);
  return mask;
}

Network network_from_mask(std::size_t n, std::uint64_t mask) {
  const auto pairs = all_pairs(n);
  if (pairs.size() > 64) throw std::length_error("too many pairs for a 64-bit edge mask");
  if (pairs.size() < 64 && (mask >> pairs.size()) != 0) {
    throw std::invalid_argument("edge mask has bits beyond the pair count");
  }
  Network g(n);
  for (std::size_t b = 0; b < pairs.size(); ++b)
    if ((mask >> b) & 1U) g.add_edge(pairs[b].first, pairs[b].second);
  return g;
}

}  // namespace netform
