#include "netform/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

namespace netform {

using nlohmann::json;

namespace {

Rational rational_field(const json& value, const std::string& field) {
  try {
    if (value.is_number_integer()) {
      return value.is_number_unsigned() ? Rational(mpz_class(std::to_string(value.get<std::uint64_t>())))
                                        : Rational(mpz_class(std::to_string(value.get<std::int64_t>())));
    }
    if (value.is_number_float()) return rational_from_double(value.get<double>());
    if (value.is_string()) return parse_rational(value.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(field + ": " + e.what());
  }
  throw ParseError(field + ": expected a number or a rational string");
}

std::size_t index_field(const json& value, const std::string& field) {
  if (!value.is_number_integer()) throw ParseError(field + ": expected an integer");
  const auto v = value.get<std::int64_t>();
  if (v < 1) throw ParseError(field + ": expected a positive integer, got " + std::to_string(v));
  return static_cast<std::size_t>(v);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

Network edges_from_json(const json& edges, std::size_t n, const std::string& field) {
  if (!edges.is_array()) throw ParseError(field + ": expected an array of [i, j] pairs");
  Network g(n);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string where = field + "[" + std::to_string(k) + "]";
    const json& e = edges[k];
    if (!e.is_array() || e.size() != 2) throw ParseError(where + ": expected [i, j]");
    const std::size_t i = index_field(e[0], where);
    const std::size_t j = index_field(e[1], where);
    if (i > n || j > n) {
      throw ParseError(where + ": endpoint out of range [1, " + std::to_string(n) + "]");
    }
    if (i == j) throw ParseError(where + ": self-loop on agent " + std::to_string(i));
    if (g.has_edge(i - 1, j - 1)) {
      throw ParseError(where + ": duplicate edge {" + std::to_string(i) + "," +
                       std::to_string(j) + "}");
    }
    g.add_edge(i - 1, j - 1);
  }
  return g;
}

std::vector<Rational> rational_list(const json& value, const std::string& field) {
  if (!value.is_array()) throw ParseError(field + ": expected an array");
  std::vector<Rational> out;
  for (std::size_t k = 0; k < value.size(); ++k)
    out.push_back(rational_field(value[k], field + "[" + std::to_string(k) + "]"));
  return out;
}

void reject_unknown(const json& doc, const std::set<std::string>& known) {
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) throw ParseError(key + ": unknown field");
  }
}

}  // namespace

InstanceDocument parse_instance(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("document: expected a JSON object");
  reject_unknown(doc, {"version", "n", "theta", "alpha", "delta", "edges"});
  if (doc.contains("version") &&
      (!doc["version"].is_string() || doc["version"].get<std::string>() != kInstanceFormat)) {
    throw ParseError("version: expected \"" + std::string(kInstanceFormat) + "\"");
  }
  for (const char* key : {"theta", "alpha", "delta"}) {
    if (!doc.contains(key)) throw ParseError(std::string(key) + ": missing");
  }
  const std::vector<Rational> theta = rational_list(doc["theta"], "theta");
  std::size_t n = theta.size();
  if (doc.contains("n")) {
    n = index_field(doc["n"], "n");
    if (n != theta.size()) {
      throw ParseError("theta: expected " + std::to_string(n) + " entries, got " +
                       std::to_string(theta.size()));
    }
  }
  if (n == 0) throw ParseError("theta: at least one agent required");
  if (n > kMaxAgents) throw ParseError("n: at most " + std::to_string(kMaxAgents) + " agents");
  for (std::size_t i = 0; i < n; ++i) {
    if (theta[i] <= 0) {
      throw ParseError("theta[" + std::to_string(i) + "]: must be positive, got " + to_string(theta[i]));
    }
  }
  const Rational alpha = rational_field(doc["alpha"], "alpha");
  if (alpha < 0 || alpha >= 1) throw ParseError("alpha: must lie in [0, 1), got " + to_string(alpha));
  const Rational delta = rational_field(doc["delta"], "delta");
  if (delta < 0) throw ParseError("delta: must be nonnegative, got " + to_string(delta));

  Network g = doc.contains("edges") ? edges_from_json(doc["edges"], n, "edges") : Network(n);
  try {
    return {Game(theta, alpha, delta), std::move(g)};
  } catch (const std::invalid_argument& e) {
    // Exact values were valid, so only the double mirror can have failed.
    throw ParseError(std::string("instance: not representable in double precision: ") + e.what());
  }
}

json edges_json(const std::vector<Edge>& edges) {
  json out = json::array();
  for (const Edge& e : edges) out.push_back({e.first + 1, e.second + 1});
  return out;
}

json to_json(const Network& network) { return edges_json(network.edges()); }

json to_json(const Game& game) {
  json theta = json::array();
  for (const auto& t : game.theta()) theta.push_back(to_string(t));
  return {{"n", game.size()},
          {"theta", theta},
          {"alpha", to_string(game.alpha())},
          {"delta", to_string(game.delta())}};
}

std::string serialize_instance(const Game& game, const Network& network) {
  json doc = to_json(game);
  doc["version"] = kInstanceFormat;
  doc["edges"] = to_json(network);
  return doc.dump(2) + "\n";
}

Network parse_network(std::string_view text, std::size_t n) {
  std::vector<std::size_t> numbers;
  for (std::size_t p = 0; p < text.size();) {
    const unsigned char c = static_cast<unsigned char>(text[p]);
    if (std::isdigit(c)) {
      std::size_t v = 0;
      while (p < text.size() && std::isdigit(static_cast<unsigned char>(text[p]))) {
        v = v * 10 + static_cast<std::size_t>(text[p] - '0');
        if (v > kMaxAgents) throw ParseError("network: agent label out of range");
        ++p;
      }
      numbers.push_back(v);
    } else if (std::isspace(c) || c == ',' || c == '-' || c == '{' || c == '}' || c == '[' ||
               c == ']' || c == '(' || c == ')') {
      ++p;
    } else {
      throw ParseError(std::string("network: unexpected character '") + text[p] + "'");
    }
  }
  if (numbers.size() % 2 != 0) throw ParseError("network: odd number of endpoints");
  json edges = json::array();
  for (std::size_t k = 0; k < numbers.size(); k += 2) {
    edges.push_back({numbers[k], numbers[k + 1]});
  }
  return edges_from_json(edges, n, "network");
}

SearchSpace parse_search_space(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("space: expected a JSON object");
  reject_unknown(doc, {"n", "mode", "theta", "alpha", "delta", "max_instances", "theta_min",
                       "theta_max", "theta_denominator", "seed", "samples", "networks",
                       "reachability", "reach_horizon"});
  SearchSpace s;
  if (!doc.contains("n")) throw ParseError("n: missing");
  s.n = index_field(doc["n"], "n");
  if (doc.contains("mode")) {
    const auto mode = doc["mode"].is_string() ? doc["mode"].get<std::string>() : "";
    if (mode == "grid") {
      s.mode = SearchMode::Grid;
    } else if (mode == "random") {
      s.mode = SearchMode::Random;
    } else {
      throw ParseError("mode: expected \"grid\" or \"random\"");
    }
  }
  if (!doc.contains("alpha")) throw ParseError("alpha: missing");
  if (!doc.contains("delta")) throw ParseError("delta: missing");
  s.alpha_grid = rational_list(doc["alpha"], "alpha");
  s.delta_grid = rational_list(doc["delta"], "delta");
  if (s.mode == SearchMode::Grid) {
    if (!doc.contains("theta") || !doc["theta"].is_array()) {
      throw ParseError("theta: grid mode needs one list of values per agent");
    }
    for (std::size_t i = 0; i < doc["theta"].size(); ++i)
      s.theta_grid.push_back(rational_list(doc["theta"][i], "theta[" + std::to_string(i) + "]"));
  } else {
    if (doc.contains("theta_min")) s.theta_min = rational_field(doc["theta_min"], "theta_min");
    if (doc.contains("theta_max")) s.theta_max = rational_field(doc["theta_max"], "theta_max");
    if (doc.contains("theta_denominator")) {
      s.theta_denominator = static_cast<unsigned>(index_field(doc["theta_denominator"], "theta_denominator"));
    }
    if (doc.contains("seed")) {
      if (!doc["seed"].is_number_unsigned()) throw ParseError("seed: expected a nonnegative integer");
      s.seed = doc["seed"].get<std::uint64_t>();
    }
    if (!doc.contains("samples")) throw ParseError("samples: random mode needs a sample count");
    s.samples = index_field(doc["samples"], "samples");
  }
  if (doc.contains("max_instances")) s.max_instances = index_field(doc["max_instances"], "max_instances");
  if (doc.contains("networks")) {
    if (!doc["networks"].is_array()) throw ParseError("networks: expected an array of edge lists");
    for (std::size_t k = 0; k < doc["networks"].size(); ++k) {
      s.networks.push_back(
          edges_from_json(doc["networks"][k], s.n, "networks[" + std::to_string(k) + "]"));
    }
  }
  if (doc.contains("reachability")) {
    if (!doc["reachability"].is_boolean()) throw ParseError("reachability: expected a boolean");
    s.annotate_reachability = doc["reachability"].get<bool>();
  }
  if (doc.contains("reach_horizon")) s.reach_horizon = index_field(doc["reach_horizon"], "reach_horizon");
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("space: ") + e.what());
  }
  return s;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  std::string s(buf);
  return s == "-0" ? "0" : s;
}

std::string export_dot(const Network& network, std::span<const double> theta,
                       std::span<const double> efforts, std::span<const double> payoffs) {
  const std::size_t n = network.size();
  if (theta.size() != n || efforts.size() != n || payoffs.size() != n) {
    throw std::invalid_argument("export_dot: inconsistent lengths");
  }
  std::ostringstream os;
  os << "graph netform {\n  node [shape=ellipse];\n";
  for (Agent i = 0; i < n; ++i) {
    os << "  " << i + 1 << " [label=\"" << i + 1 << ": θ=" << format_number(theta[i])
       << ", y*=" << format_number(efforts[i]) << ", U=" << format_number(payoffs[i])
       << "\"];\n";
  }
  for (const Edge& e : network.edges()) os << "  " << e.first + 1 << " -- " << e.second + 1 << ";\n";
  os << "}\n";
  return os.str();
}

namespace {

json number_or_null(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

}  // namespace

json to_json(const Deviation& deviation) {
  if (const auto* add = std::get_if<AddLink>(&deviation)) {
    return {{"type", "add"}, {"i", add->i + 1}, {"j", add->j + 1}};
  }
  const auto& s = std::get<Sever>(deviation);
  return {{"type", "sever"}, {"agent", s.agent + 1}, {"links", edges_json(s.links)}};
}

json to_json(const StabilityReport& report) {
  json ties = json::array();
  for (const auto& t : report.near_ties) {
    ties.push_back({{"deviation", to_json(t.deviation)},
                    {"agent", t.agent + 1},
                    {"float_margin", t.float_margin},
                    {"exact_sign", t.exact_sign}});
  }
  json out = {{"stable", report.stable},
              {"witness", report.witness ? to_json(*report.witness) : json(nullptr)},
              {"delta_i", report.witness ? json(report.delta_i) : json(nullptr)},
              {"delta_j", report.witness && std::holds_alternative<AddLink>(*report.witness)
                              ? json(report.delta_j)
                              : json(nullptr)},
              {"deviations_checked", report.deviations_checked},
              {"escalations", report.escalations},
              {"min_margin", number_or_null(report.min_margin)},
              {"near_ties", ties}};
  if (report.exact_delta_i) out["exact_delta_i"] = to_string(*report.exact_delta_i);
  if (report.exact_delta_j) out["exact_delta_j"] = to_string(*report.exact_delta_j);
  return out;
}

json to_json(const LocalCompletenessReport& report) {
  json out = {{"locally_complete", report.locally_complete}, {"violation", nullptr}, {"missing", nullptr}};
  if (report.violation) {
    const auto& v = *report.violation;
    out["violation"] = {v[0] + 1, v[1] + 1, v[2] + 1};
  }
  if (report.missing) out["missing"] = {report.missing->first + 1, report.missing->second + 1};
  return out;
}

json to_json(const Lemma2Report& report) {
  json out = {{"utility_order_violated", report.utility_order_violated},
              {"effort_order_violated", report.effort_order_violated},
              {"utility_with_j", report.utility_with_j},
              {"utility_with_k", report.utility_with_k},
              {"effort_with_j", report.effort_with_j},
              {"effort_with_k", report.effort_with_k}};
  if (report.exact) {
    out["exact"] = {{"utility_with_j", to_string(report.exact->utility_with_j)},
                    {"utility_with_k", to_string(report.exact->utility_with_k)},
                    {"effort_with_j", to_string(report.exact->effort_with_j)},
                    {"effort_with_k", to_string(report.exact->effort_with_k)}};
  }
  return out;
}

json to_json(const FormationEvent& event) {
  json out = {{"t", event.t}, {"pair", {event.pair.first + 1, event.pair.second + 1}}};
  if (const auto* s = std::get_if<Severed>(&event.action)) {
    out["action"] = "sever";
    out["agent"] = s->agent + 1;
    out["links"] = edges_json(s->links);
  } else if (std::holds_alternative<LinkFormed>(event.action)) {
    out["action"] = "link";
  } else {
    out["action"] = "none";
  }
  return out;
}

json to_json(const Trajectory& trajectory) {
  json networks = json::array();
  for (const auto& g : trajectory.networks) networks.push_back(to_json(g));
  json events = json::array();
  for (const auto& e : trajectory.events) events.push_back(to_json(e));
  json reached = nullptr;
  if (trajectory.reached) {
    reached = {{"network", to_json(trajectory.reached->network)}, {"time", trajectory.reached->time}};
  }
  return {{"seed", trajectory.seed}, {"networks", networks}, {"events", events}, {"reached", reached}};
}

json to_json(const CounterexampleRecord& record) {
  json out = {{"instance", to_json(record.game)},
              {"network", to_json(record.network)},
              {"exact_verified", record.exact_verified},
              {"reachable", record.reachable ? edges_json(*record.reachable) : json(nullptr)}};
  if (const auto* p = std::get_if<Prop1Evidence>(&record.evidence)) {
    out["kind"] = "prop1";
    out["stability"] = to_json(p->stability);
    out["local_completeness"] = to_json(p->completeness);
  } else {
    const auto& l = std::get<Lemma2Evidence>(record.evidence);
    out["kind"] = "lemma2";
    out["triple"] = {l.i + 1, l.j + 1, l.k + 1};
    out["lemma2"] = to_json(l.report);
  }
  return out;
}

}  // namespace netform
