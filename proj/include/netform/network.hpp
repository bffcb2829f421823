#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace netform {

/// Zero-based agent index. Documents and reports use 1-based labels.
using Agent = std::size_t;

/// Hard cap on agent count; downstream enumeration is exponential.
inline constexpr std::size_t kMaxAgents = 64;

/// Unordered pair stored with first < second.
struct Edge {
  Agent first = 0;
  Agent second = 0;

  Edge() = default;
  Edge(Agent a, Agent b) : first(a < b ? a : b), second(a < b ? b : a) {}

  Agent other(Agent i) const { return i == first ? second : first; }
  bool touches(Agent i) const { return i == first || i == second; }

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph on agents [0, n). Adjacency is one 64-bit row
/// per agent, so membership and degree are constant time.
class Network {
 public:
  Network() = default;
  explicit Network(std::size_t n);
  Network(std::size_t n, const std::vector<Edge>& edges);

  /// Complete graph on n agents.
  static Network complete(std::size_t n);

  std::size_t size() const { return adjacency_.size(); }
  std::size_t edge_count() const;

  bool has_edge(Agent i, Agent j) const;
  /// Throws std::invalid_argument on self-loops, duplicates or bad indices.
  void add_edge(Agent i, Agent j);
  /// Throws std::invalid_argument when the edge is absent.
  void remove_edge(Agent i, Agent j);

  Network with_edge(Agent i, Agent j) const;
  Network without_edges(const std::vector<Edge>& edges) const;

  /// Neighbors of i in ascending order.
  std::vector<Agent> neighbors(Agent i) const;
  std::size_t degree(Agent i) const;
  std::size_t max_degree() const;
  std::uint64_t neighbor_mask(Agent i) const;

  /// Links of i in canonical order (ascending other endpoint).
  std::vector<Edge> links_of(Agent i) const;
  /// All edges, lexicographic in (first, second).
  std::vector<Edge> edges() const;

  /// Edge list with 1-based labels, e.g. "{1,2},{1,3}"; "{}" when empty.
  std::string to_string() const;

  friend bool operator==(const Network&, const Network&) = default;

 private:
  void check_agent(Agent i) const;

  std::vector<std::uint64_t> adjacency_;
};

/// Canonical index of edge {i,j} among the n(n-1)/2 unordered pairs, in
/// the order (0,1),(0,2),...,(0,n-1),(1,2),...
std::size_t pair_index(std::size_t n, Agent i, Agent j);
/// All unordered pairs in canonical order.
std::vector<Edge> all_pairs(std::size_t n);

/// Bit pair_index(i,j) set for each edge. Requires n(n-1)/2 <= 64.
std::uint64_t edge_mask(const Network& network);
Network network_from_mask(std::size_t n, std::uint64_t mask);

}  // namespace netform
