#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "netform/dynamics.hpp"
#include "netform/exact.hpp"
#include "netform/network.hpp"
#include "netform/search.hpp"
#include "netform/stability.hpp"

namespace netform {

/// Malformed or invalid input document. The message names the field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kInstanceFormat = "netform-instance/1";

struct InstanceDocument {
  Game game;
  Network network;
};

/// Parses an instance document:
///   {"version": "netform-instance/1", "n": 4,
///    "theta": [20, 10, 11, 13], "alpha": "2/3", "delta": 75,
///    "edges": [[1, 2], [3, 4]]}
/// Numbers may be JSON numbers (taken at their exact binary value) or
/// strings holding "p/q", integers or decimals (taken exactly). "version"
/// and "edges" are optional; agents are 1-based.
InstanceDocument parse_instance(std::string_view text);

/// Canonical document: sorted keys, every number as an exact rational
/// string, edges ascending.
std::string serialize_instance(const Game& game, const Network& network);

/// Edge list such as "1-2,1-3", "{1,2},{1,3}", "[[1,2],[1,3]]" or "{}".
Network parse_network(std::string_view text, std::size_t n);

/// Search space document; see README for the schema.
SearchSpace parse_search_space(std::string_view text);

/// Graphviz rendering with node labels "i: θ=…, y*=…, U=…". Output is
/// deterministic in node and edge order.
std::string export_dot(const Network& network, std::span<const double> theta,
                       std::span<const double> efforts, std::span<const double> payoffs);

/// Ten significant digits, no trailing zeros.
std::string format_number(double value);

nlohmann::json edges_json(const std::vector<Edge>& edges);
nlohmann::json to_json(const Network& network);
nlohmann::json to_json(const Deviation& deviation);
nlohmann::json to_json(const StabilityReport& report);
nlohmann::json to_json(const LocalCompletenessReport& report);
nlohmann::json to_json(const Lemma2Report& report);
nlohmann::json to_json(const FormationEvent& event);
nlohmann::json to_json(const Trajectory& trajectory);
nlohmann::json to_json(const Game& game);
nlohmann::json to_json(const CounterexampleRecord& record);

}  // namespace netform
