#include "netform/replicate.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "netform/dynamics.hpp"
#include "netform/io.hpp"
#include "netform/model.hpp"
#include "netform/stability.hpp"

namespace netform {

namespace {

constexpr const char* kBaselineSource = "figure: original equilibrium (alpha=2/3, delta=75)";
constexpr const char* kLinkThreeSource = "figure: partner-choice counterexample, right panel";
constexpr const char* kLinkTwoSource = "figure: partner-choice counterexample, left panel";
constexpr const char* kMyopicSource = "text: myopic partner choice against the original equilibrium";
constexpr const char* kProp1Source = "figure: stable network that is not locally complete";
constexpr const char* kPathSource = "text: formation path {} -> {1,2} -> {1,2},{1,3}";

Game reference_game(bool with_outsider) {
  std::vector<Rational> theta{20, 10, 11, 13};
  if (with_outsider) theta.emplace_back(19);
  return Game(std::move(theta), Rational(2, 3), Rational(75));
}

ReplicationItem numeric(std::string section, std::string label, const char* source,
                        double expected, double computed, double tolerance) {
  ReplicationItem it;
  it.section = std::move(section);
  it.label = std::move(label);
  it.source = source;
  it.expected = format_number(expected);
  it.computed = format_number(computed);
  it.abs_error = std::abs(expected - computed);
  it.tolerance = tolerance;
  it.pass = *it.abs_error <= tolerance;
  return it;
}

ReplicationItem check(std::string section, std::string label, const char* source,
                      std::string expected, std::string computed) {
  ReplicationItem it;
  it.section = std::move(section);
  it.label = std::move(label);
  it.source = source;
  it.pass = expected == computed;
  it.expected = std::move(expected);
  it.computed = std::move(computed);
  return it;
}

std::string pairs_string(const std::vector<Edge>& pairs) {
  std::ostringstream os;
  os << '[';
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    os << (k ? ", " : "") << '(' << pairs[k].first + 1 << ',' << pairs[k].second + 1 << ')';
  }
  os << ']';
  return os.str();
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

bool ReplicationReport::passed() const {
  for (const auto& it : items)
    if (!it.informational && !it.pass) return false;
  return true;
}

std::optional<std::size_t> find_canonical_fixture(const std::vector<CounterexampleRecord>& records) {
  const Network target(3, {{0, 1}, {0, 2}});
  const std::vector<Edge> path{{0, 1}, {0, 2}};
  for (std::size_t r = 0; r < records.size(); ++r) {
    if (records[r].kind == CounterexampleKind::Prop1 && records[r].network == target &&
        records[r].reachable && *records[r].reachable == path) {
      return r;
    }
  }
  return std::nullopt;
}

ReplicationReport replicate(const SearchOptions& options) {
  ReplicationReport rep;
  CheckOptions exact;
  exact.force_exact = true;

  // Two disjoint pairs.
  {
    const Game game = reference_game(false);
    const Network g(4, {{0, 1}, {2, 3}});
    const auto y = equilibrium_efforts(game.instance(), g);
    const double expected[] = {16, 14, 11.8, 12.2};
    for (Agent i = 0; i < 4; ++i) {
      rep.items.push_back(numeric("baseline equilibrium", "y*_" + std::to_string(i + 1),
                                  kBaselineSource, expected[i], y[i], 1e-9));
    }
    const auto xy = exact::equilibrium_efforts(game, g);
    std::string computed;
    for (Agent i = 0; i < 4; ++i) computed += (i ? ", " : "") + to_string(xy[i]);
    rep.items.push_back(check("baseline equilibrium", "exact y*", kBaselineSource,
                              "16, 14, 59/5, 61/5", computed));
  }

  // Outside agent 5 joins by linking to 3 or to 2.
  const Game game5 = reference_game(true);
  const Network base5(5, {{0, 1}, {2, 3}});
  {
    const Network g = base5.with_edge(4, 2);
    const auto y = equilibrium_efforts(game5.instance(), g);
    const double expected[] = {16, 14, 13, 13, 15};
    for (Agent i = 0; i < 5; ++i) {
      rep.items.push_back(numeric("outsider links to 3", "y*_" + std::to_string(i + 1),
                                  kLinkThreeSource, expected[i], y[i], 1e-9));
    }
  }
  {
    const Network g = base5.with_edge(4, 1);
    const auto y = equilibrium_efforts(game5.instance(), g);
    // Displayed values are rounded to one decimal.
    const double expected[] = {15.9, 13.8, 11.8, 12.2, 15.5};
    for (Agent i = 0; i < 5; ++i) {
      rep.items.push_back(numeric("outsider links to 2", "y*_" + std::to_string(i + 1),
                                  kLinkTwoSource, expected[i], y[i], 0.05));
    }
    const auto xy = exact::equilibrium_efforts(game5, g);
    rep.items.push_back(check("outsider links to 2", "exact y*_1, y*_5", kLinkTwoSource,
                              "238/15, 233/15", to_string(xy[0]) + ", " + to_string(xy[4])));
  }

  // Partner monotonicity, re-equilibrated.
  {
    const auto r = lemma2_violation(game5, base5, 4, 1, 2, exact);
    rep.items.push_back(check("partner monotonicity (re-equilibrated)",
                              "U_5(g+{5,2}) > U_5(g+{5,3})", kLinkTwoSource, "yes",
                              yes_no(r.exact->utility_with_j > r.exact->utility_with_k)));
    rep.items.push_back(check("partner monotonicity (re-equilibrated)",
                              "y*_5(g+{5,2}) > y*_5(g+{5,3})", kLinkTwoSource, "yes",
                              yes_no(r.exact->effort_with_j > r.exact->effort_with_k)));
    auto u = numeric("partner monotonicity (re-equilibrated)", "y*_5 with link to 3",
                     kLinkThreeSource, 15, to_double(r.exact->effort_with_k), 1e-9);
    rep.items.push_back(u);
  }

  // Partner monotonicity, myopic.
  {
    const auto p = myopic_link_preference(game5, base5, 4, 1, 2, exact);
    rep.items.push_back(check("partner monotonicity (myopic)", "preferred partner of 5",
                              kMyopicSource, "2", std::to_string(p.preferred + 1)));
    rep.items.push_back(numeric("partner monotonicity (myopic)", "frozen y*_2", kMyopicSource, 14,
                                p.frozen_effort_j, 1e-9));
    rep.items.push_back(numeric("partner monotonicity (myopic)", "frozen y*_3", kBaselineSource,
                                11.8, p.frozen_effort_k, 1e-9));
    ReplicationItem note;
    note.section = "partner monotonicity (myopic)";
    note.label = "frozen y*_3 as quoted in the reference prose";
    note.source = kMyopicSource;
    note.expected = "11";
    note.computed = format_number(p.frozen_effort_k);
    note.informational = true;
    note.pass = false;
    rep.items.push_back(note);
  }

  // Stable but not locally complete, and its formation path.
  {
    const auto start = std::chrono::steady_clock::now();
    auto result = find_prop1_counterexamples(canonical_prop1_space(), options);
    rep.prop1_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rep.prop1_hits = std::move(result.records);
    rep.canonical_fixture = find_canonical_fixture(rep.prop1_hits);

    std::size_t verified = 0;
    for (const auto& r : rep.prop1_hits) verified += verify_record(r).ok ? 1 : 0;
    rep.items.push_back(check("stable, not locally complete", "exact-verified hits >= 1",
                              kProp1Source, "yes", yes_no(verified >= 1)));
    rep.items.push_back(check("stable, not locally complete", "every hit re-verifies",
                              kProp1Source, std::to_string(rep.prop1_hits.size()),
                              std::to_string(verified)));
    rep.items.push_back(check("stable, not locally complete",
                              "hit on {1,2},{1,3} reached via (1,2),(1,3)", kProp1Source, "yes",
                              yes_no(rep.canonical_fixture.has_value())));

    if (rep.canonical_fixture) {
      const auto& rec = rep.prop1_hits[*rep.canonical_fixture];
      const Network empty(3);
      const Network one(3, {{0, 1}});
      const bool step1 = !best_profitable_severance(rec.game, empty, 0, exact) &&
                         !best_profitable_severance(rec.game, empty, 1, exact) &&
                         mutual_link_beneficial(rec.game, empty, 0, 1, exact);
      const bool step2 = !best_profitable_severance(rec.game, one, 0, exact) &&
                         !best_profitable_severance(rec.game, one, 2, exact) &&
                         mutual_link_beneficial(rec.game, one, 0, 2, exact);
      const auto witness = is_reachable(rec.game, rec.network, 8, exact);
      rep.items.push_back(check("formation path", "reachability witness", kPathSource,
                                "[(1,2), (1,3)]", witness ? pairs_string(*witness) : "none"));
      rep.items.push_back(check("formation path", "{} -> {1,2} weakly improves both, one strictly",
                                kPathSource, "yes", yes_no(step1)));
      rep.items.push_back(check("formation path",
                                "{1,2} -> {1,2},{1,3} weakly improves both, one strictly",
                                kPathSource, "yes", yes_no(step2)));
      ReplicationItem fixture;
      fixture.section = "formation path";
      fixture.label = "canonical fixture";
      fixture.source = kProp1Source;
      fixture.expected = "(not stated in the reference)";
      fixture.computed = to_json(rec.game).dump();
      fixture.informational = true;
      rep.items.push_back(fixture);
    }
  }
  return rep;
}

std::string format_report(const ReplicationReport& report) {
  std::ostringstream os;
  std::string section;
  for (const auto& it : report.items) {
    if (it.section != section) {
      section = it.section;
      os << "\n[" << section << "]\n";
    }
    const char* status = it.informational ? "NOTE" : (it.pass ? "PASS" : "FAIL");
    os << "  " << status << "  " << it.label << ": expected " << it.expected << ", computed "
       << it.computed;
    if (it.abs_error) os << ", |err| " << format_number(*it.abs_error);
    os << "   <" << it.source << ">\n";
  }
  os << "\nstable non-locally-complete hits: " << report.prop1_hits.size() << " (grid search "
     << format_number(report.prop1_seconds) << " s)\n";
  os << (report.passed() ? "ALL PASS" : "FAILURES PRESENT") << "\n";
  return os.str();
}

nlohmann::json to_json(const ReplicationReport& report) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& it : report.items) {
    nlohmann::json j = {{"section", it.section},     {"label", it.label},
                        {"source", it.source},       {"expected", it.expected},
                        {"computed", it.computed},   {"pass", it.pass},
                        {"informational", it.informational}};
    j["abs_error"] = it.abs_error ? nlohmann::json(*it.abs_error) : nlohmann::json(nullptr);
    j["tolerance"] = it.tolerance ? nlohmann::json(*it.tolerance) : nlohmann::json(nullptr);
    items.push_back(std::move(j));
  }
  nlohmann::json hits = nlohmann::json::array();
  for (const auto& r : report.prop1_hits) hits.push_back(to_json(r));
  return {{"items", items},
          {"passed", report.passed()},
          {"prop1_hits", hits},
          {"canonical_fixture", report.canonical_fixture ? nlohmann::json(*report.canonical_fixture)
                                                         : nlohmann::json(nullptr)},
          {"prop1_seconds", report.prop1_seconds}};
}

}  // namespace netform
