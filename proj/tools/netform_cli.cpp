// netform: equilibrium efforts, stability, formation dynamics and
// counterexample search for the local-average network formation game.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "netform/dynamics.hpp"
#include "netform/io.hpp"
#include "netform/model.hpp"
#include "netform/replicate.hpp"
#include "netform/search.hpp"
#include "netform/stability.hpp"

namespace {

using namespace netform;
using nlohmann::json;

constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;

struct Globals {
  bool exact = false;
  bool json_out = false;
  double eps = kDefaultEscalation;
  unsigned threads = 0;

  CheckOptions check() const { return {eps, exact}; }
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

InstanceDocument load_instance(const std::string& path) { return parse_instance(read_input(path)); }

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string agent_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_number(v[i]);
  return s;
}

int cmd_solve(const Globals& g, const std::string& path) {
  const auto doc = load_instance(path);
  SolveDiagnostics diag;
  const auto y = equilibrium_efforts(doc.game.instance(), doc.network, &diag);
  const auto u = payoffs(doc.game.instance(), doc.network);
  std::vector<Rational> xy, xu;
  if (g.exact) {
    xy = exact::equilibrium_efforts(doc.game, doc.network);
    xu = exact::payoffs(doc.game, doc.network);
  }
  if (g.json_out) {
    json out = {{"network", to_json(doc.network)},
                {"efforts", y},
                {"payoffs", u},
                {"max_residual", diag.max_residual},
                {"well_conditioned", diag.well_conditioned}};
    if (g.exact) {
      json ey = json::array(), eu = json::array();
      for (const auto& q : xy) ey.push_back(to_string(q));
      for (const auto& q : xu) eu.push_back(to_string(q));
      out["exact_efforts"] = ey;
      out["exact_payoffs"] = eu;
      out["max_exact_discrepancy"] = exact::compare_exact_float(doc.game, doc.network);
    }
    print_json(out);
  } else {
    std::cout << "network: " << doc.network.to_string() << "\n";
    for (Agent i = 0; i < y.size(); ++i) {
      std::cout << "  agent " << i + 1 << ": y*=" << format_number(y[i])
                << "  U=" << format_number(u[i]);
      if (g.exact) std::cout << "  (exact y*=" << to_string(xy[i]) << ", U=" << to_string(xu[i]) << ")";
      std::cout << "\n";
    }
    std::cout << "fixed-point residual: " << format_number(diag.max_residual) << "\n";
    if (!diag.well_conditioned) std::cout << "warning: residual exceeds tolerance\n";
  }
  return diag.well_conditioned ? 0 : kExitCheckFailed;
}

int cmd_stability(const Globals& g, const std::string& path) {
  const auto doc = load_instance(path);
  const auto r = is_pairwise_nash_stable(doc.game, doc.network, g.check());
  if (g.json_out) {
    print_json(to_json(r));
  } else {
    std::cout << "network " << doc.network.to_string() << " is "
              << (r.stable ? "pairwise Nash stable" : "NOT pairwise Nash stable") << "\n";
    if (r.witness) {
      std::cout << "  witness: " << describe(*r.witness) << "  dU_i=" << format_number(r.delta_i);
      if (r.exact_delta_i) std::cout << " (" << to_string(*r.exact_delta_i) << ")";
      if (std::holds_alternative<AddLink>(*r.witness)) {
        std::cout << "  dU_j=" << format_number(r.delta_j);
        if (r.exact_delta_j) std::cout << " (" << to_string(*r.exact_delta_j) << ")";
      }
      std::cout << "\n";
    }
    std::cout << "  deviations checked: " << r.deviations_checked
              << ", exact escalations: " << r.escalations << "\n";
    for (const auto& t : r.near_ties) {
      std::cout << "  near tie: " << describe(t.deviation) << " agent " << t.agent + 1
                << " float " << format_number(t.float_margin) << " vs exact sign " << t.exact_sign
                << "\n";
    }
  }
  return r.stable ? 0 : kExitCheckFailed;
}

int cmd_local_complete(const Globals& g, const std::string& path) {
  const auto doc = load_instance(path);
  const auto r = is_locally_complete(doc.network, std::span<const Rational>(doc.game.theta()));
  if (g.json_out) {
    print_json(to_json(r));
  } else if (r.locally_complete) {
    std::cout << "network " << doc.network.to_string() << " is locally complete\n";
  } else {
    const auto& v = *r.violation;
    std::cout << "network " << doc.network.to_string() << " is NOT locally complete: edge {"
              << v[0] + 1 << "," << v[1] + 1 << "} spans agent " << v[2] + 1 << " but {"
              << r.missing->first + 1 << "," << r.missing->second + 1 << "} is missing\n";
  }
  return r.locally_complete ? 0 : kExitCheckFailed;
}

int cmd_dynamics(const Globals& g, const std::string& path, std::uint64_t seed, std::size_t t_max) {
  const auto doc = load_instance(path);
  const auto tr = run_formation(doc.game, seed, t_max, g.check());
  if (g.json_out) {
    print_json(to_json(tr));
  } else {
    for (const auto& e : tr.events) {
      std::cout << "t=" << e.t << " pair (" << e.pair.first + 1 << "," << e.pair.second + 1 << "): ";
      if (const auto* s = std::get_if<Severed>(&e.action)) {
        std::cout << "agent " << s->agent + 1 << " severs";
        for (const auto& l : s->links) std::cout << " {" << l.first + 1 << "," << l.second + 1 << "}";
      } else if (std::holds_alternative<LinkFormed>(e.action)) {
        std::cout << "link formed";
      } else {
        std::cout << "no change";
      }
      std::cout << "  -> " << tr.networks[e.t + 1].to_string() << "\n";
    }
    if (tr.reached) {
      std::cout << "reached stable network " << tr.reached->network.to_string() << " at T="
                << tr.reached->time << "\n";
    } else {
      std::cout << "no stable network reached within " << t_max << " rounds\n";
    }
  }
  return tr.reached ? 0 : kExitCheckFailed;
}

int cmd_reachable(const Globals& g, const std::string& path, const std::string& target_text,
                  std::size_t horizon) {
  const auto doc = load_instance(path);
  const Network target = parse_network(target_text, doc.game.size());
  const auto w = is_reachable(doc.game, target, horizon, g.check());
  if (g.json_out) {
    print_json({{"target", to_json(target)},
                {"reachable", w.has_value()},
                {"witness", w ? edges_json(*w) : json(nullptr)}});
  } else if (w) {
    std::cout << target.to_string() << " is reachable via pairs";
    for (const auto& p : *w) std::cout << " (" << p.first + 1 << "," << p.second + 1 << ")";
    if (w->empty()) std::cout << " (none: the empty network is stable)";
    std::cout << "\n";
  } else {
    std::cout << target.to_string() << " is not reachable within " << horizon << " rounds\n";
  }
  return w ? 0 : kExitCheckFailed;
}

int cmd_search(const Globals& g, const std::string& kind, const std::string& space_arg) {
  SearchSpace space;
  if (space_arg == "canonical") {
    space = kind == "prop1" ? canonical_prop1_space() : reference_lemma2_space();
  } else {
    space = parse_search_space(read_input(space_arg));
  }
  SearchOptions opts{g.check(), g.threads};
  const auto result = kind == "prop1" ? find_prop1_counterexamples(space, opts)
                                      : find_lemma2_counterexamples(space, opts);
  std::size_t failed = 0;
  for (const auto& r : result.records) {
    if (!verify_record(r).ok) ++failed;
    std::cout << to_json(r).dump() << "\n";
  }
  std::cerr << result.records.size() << " records, " << result.instances_evaluated
            << " instances, " << result.networks_evaluated << " networks, "
            << result.rejected_by_exact << " rejected by exact check"
            << (result.budget_exhausted ? ", budget exhausted" : "") << "\n";
  return failed == 0 ? 0 : kExitCheckFailed;
}

int cmd_replicate(const Globals& g) {
  const auto rep = replicate({g.check(), g.threads});
  if (g.json_out) {
    print_json(to_json(rep));
  } else {
    std::cout << format_report(rep);
  }
  return rep.passed() ? 0 : kExitCheckFailed;
}

int cmd_export_dot(const std::string& path) {
  const auto doc = load_instance(path);
  const auto& inst = doc.game.instance();
  const auto y = equilibrium_efforts(inst, doc.network);
  const auto u = payoffs(inst, doc.network);
  const std::vector<double> theta(inst.theta().begin(), inst.theta().end());
  std::cout << export_dot(doc.network, theta, y, u);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibrium efforts, pairwise Nash stability and network formation"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--exact", g.exact, "Decide every comparison in exact rational arithmetic");
  app.add_flag("--json", g.json_out, "Machine-readable output");
  app.add_option("--eps", g.eps, "Float margin below which decisions are re-checked exactly")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--threads", g.threads, "Search worker threads (0 = all cores)");

  std::string instance_path;
  auto add_instance_cmd = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("instance", instance_path, "Instance document (JSON, '-' for stdin)")
        ->required();
    return sub;
  };
  auto* solve = add_instance_cmd("solve", "Equilibrium efforts and payoffs");
  auto* stability = add_instance_cmd("stability", "Pairwise Nash stability check");
  auto* local = add_instance_cmd("local-complete", "Local completeness check");
  auto* dot = add_instance_cmd("export-dot", "Graphviz rendering of the network");

  std::uint64_t seed = 0;
  std::size_t t_max = 1000;
  auto* dynamics = add_instance_cmd("dynamics", "Simulate the formation process");
  dynamics->add_option("--seed", seed, "Pair-selection seed");
  dynamics->add_option("--t-max", t_max, "Maximum number of rounds")->check(CLI::PositiveNumber);

  std::string target;
  std::size_t horizon = 32;
  auto* reachable = add_instance_cmd("reachable", "Reachability of a stable network from empty");
  reachable->add_option("--target", target, "Edge list, e.g. 1-2,1-3")->required();
  reachable->add_option("--horizon", horizon, "Maximum number of rounds");

  std::string kind, space;
  auto* search = app.add_subcommand("search", "Counterexample search (JSON lines on stdout)");
  search->add_option("kind", kind, "prop1 or lemma2")
      ->required()
      ->check(CLI::IsMember({"prop1", "lemma2"}));
  search->add_option("space", space, "Search space document, or 'canonical'")->required();

  auto* replicate_cmd = app.add_subcommand("replicate", "Recompute all reference values");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return cmd_solve(g, instance_path);
    if (*stability) return cmd_stability(g, instance_path);
    if (*local) return cmd_local_complete(g, instance_path);
    if (*dot) return cmd_export_dot(instance_path);
    if (*dynamics) return cmd_dynamics(g, instance_path, seed, t_max);
    if (*reachable) return cmd_reachable(g, instance_path, target, horizon);
    if (*search) return cmd_search(g, kind, space);
    if (*replicate_cmd) return cmd_replicate(g);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return 0;
}
