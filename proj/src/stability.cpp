#include "netform/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "netform/compare.hpp"
#include "netform/model.hpp"

namespace netform {

Network apply(const Network& network, const Deviation& deviation) {
  if (const auto* add = std::get_if<AddLink>(&deviation)) {
    return network.with_edge(add->i, add->j);
  }
  return network.without_edges(std::get<Sever>(deviation).links);
}

std::string describe(const Deviation& deviation) {
  std::ostringstream os;
  if (const auto* add = std::get_if<AddLink>(&deviation)) {
    os << "add {" << add->i + 1 << ',' << add->j + 1 << '}';
    return os.str();
  }
  const auto& sever = std::get<Sever>(deviation);
  os << "sever " << sever.agent + 1 << ':';
  for (std::size_t k = 0; k < sever.links.size(); ++k) {
    os << (k ? "," : " ") << '{' << sever.links[k].first + 1 << ','
       << sever.links[k].second + 1 << '}';
  }
  return os.str();
}

namespace {

template <typename T>
std::vector<Agent> interval_of(std::span<const T> theta, Agent i, Agent j) {
  if (i >= theta.size() || j >= theta.size()) {
    throw std::out_of_range("agent index out of range");
  }
  const T& lo = theta[i] < theta[j] ? theta[i] : theta[j];
  const T& hi = theta[i] < theta[j] ? theta[j] : theta[i];
  std::vector<Agent> out;
  for (Agent k = 0; k < theta.size(); ++k)
    if (lo <= theta[k] && theta[k] <= hi) out.push_back(k);
  return out;
}

template <typename T>
LocalCompletenessReport completeness_of(const Network& network, std::span<const T> theta) {
  if (theta.size() != network.size()) {
    throw std::invalid_argument("type vector length mismatch");
  }
  for (const Edge& e : network.edges()) {
    Agent i = e.first;
    Agent j = e.second;
    if (theta[j] < theta[i]) std::swap(i, j);
    const auto members = interval_of(theta, i, j);
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const Agent p = members[a];
        const Agent q = members[b];
        if (network.has_edge(p, q)) continue;
        const Agent k = (p != i && p != j) ? p : q;
        return {false, std::array<Agent, 3>{i, j, k}, Edge(p, q)};
      }
    }
  }
  return {};
}

}  // namespace

std::vector<Agent> interval_agents(std::span<const double> theta, Agent i, Agent j) {
  return interval_of(theta, i, j);
}

std::vector<Agent> interval_agents(std::span<const Rational> theta, Agent i, Agent j) {
  return interval_of(theta, i, j);
}

LocalCompletenessReport is_locally_complete(const Network& network,
                                            std::span<const double> theta) {
  return completeness_of(network, theta);
}

LocalCompletenessReport is_locally_complete(const Network& network,
                                            std::span<const Rational> theta) {
  return completeness_of(network, theta);
}

void for_each_deviation(const Network& network,
                        const std::function<bool(const Deviation&)>& visit) {
  if (network.max_degree() > kMaxSeverDegree) {
    throw std::length_error("degree " + std::to_string(network.max_degree()) +
                            " exceeds the severance enumeration guard of " +
                            std::to_string(kMaxSeverDegree));
  }
  const std::size_t n = network.size();
  for (Agent i = 0; i < n; ++i) {
    for (Agent j = i + 1; j < n; ++j) {
      if (!network.has_edge(i, j) && !visit(AddLink{i, j})) return;
    }
  }
  for (Agent i = 0; i < n; ++i) {
    const auto links = network.links_of(i);
    const std::uint32_t subsets = std::uint32_t{1} << links.size();
    for (std::uint32_t mask = 1; mask < subsets; ++mask) {
      Sever s{i, {}};
      for (std::size_t b = 0; b < links.size(); ++b)
        if ((mask >> b) & 1U) s.links.push_back(links[b]);
      if (!visit(s)) return;
    }
  }
}

std::vector<Deviation> enumerate_deviations(const Network& network) {
  std::vector<Deviation> out;
  for_each_deviation(network, [&](const Deviation& d) {
    out.push_back(d);
    return true;
  });
  return out;
}

namespace {

void record_ties(StabilityReport& report, const Deviation& d,
                 const std::vector<Agent>& agents,
                 const std::vector<UtilityDelta>& deltas) {
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    if (deltas[k].disagreed) {
      report.near_ties.push_back({d, agents[k], deltas[k].value, deltas[k].sign});
    }
  }
}

double reported(const UtilityDelta& d) {
  return d.exact ? to_double(*d.exact) : d.value;
}

}  // namespace

StabilityReport is_pairwise_nash_stable(const Game& game, const Network& network,
                                        const CheckOptions& options) {
  if (network.size() != game.size()) {
    throw std::invalid_argument("network size mismatch");
  }
  StabilityReport report;
  report.min_margin = std::numeric_limits<double>::infinity();
  UtilityComparer cmp(game, network, options);

  for_each_deviation(network, [&](const Deviation& d) {
    ++report.deviations_checked;
    const Network next = apply(network, d);
    if (const auto* add = std::get_if<AddLink>(&d)) {
      const std::vector<Agent> who{add->i, add->j};
      const auto ds = cmp.deltas(next, who);
      record_ties(report, d, who, ds);
      report.min_margin = std::min({report.min_margin, std::abs(ds[0].value),
                                    std::abs(ds[1].value)});
      const int si = ds[0].sign;
      const int sj = ds[1].sign;
      if ((si > 0 && sj >= 0) || (sj > 0 && si >= 0)) {
        const bool first_gains = si > 0;
        const auto& gi = first_gains ? ds[0] : ds[1];
        const auto& gj = first_gains ? ds[1] : ds[0];
        report.stable = false;
        report.witness = first_gains ? AddLink{add->i, add->j} : AddLink{add->j, add->i};
        report.delta_i = reported(gi);
        report.delta_j = reported(gj);
        report.exact_delta_i = gi.exact;
        report.exact_delta_j = gj.exact;
        return false;
      }
      return true;
    }
    const auto& sever = std::get<Sever>(d);
    const std::vector<Agent> who{sever.agent};
    const auto ds = cmp.deltas(next, who);
    record_ties(report, d, who, ds);
    report.min_margin = std::min(report.min_margin, std::abs(ds[0].value));
    if (ds[0].sign > 0) {
      report.stable = false;
      report.witness = d;
      report.delta_i = reported(ds[0]);
      report.exact_delta_i = ds[0].exact;
      return false;
    }
    return true;
  });

  report.escalations = cmp.escalations();
  return report;
}

namespace {

void check_triple(const Game& game, const Network& network, Agent i, Agent j, Agent k) {
  const std::size_t n = game.size();
  if (network.size() != n) throw std::invalid_argument("network size mismatch");
  if (i >= n || j >= n || k >= n) throw std::out_of_range("agent index out of range");
  if (i == j || i == k || j == k) {
    throw std::invalid_argument("agents i, j, k must be distinct");
  }
  if (!(game.theta()[k] > game.theta()[j])) {
    throw std::invalid_argument("requires theta_k > theta_j");
  }
  if (network.has_edge(i, j) || network.has_edge(i, k)) {
    throw std::invalid_argument("candidate links must be absent");
  }
}

}  // namespace

Lemma2Report lemma2_violation(const Game& game, const Network& network, Agent i,
                              Agent j, Agent k, const CheckOptions& options) {
  check_triple(game, network, i, j, k);
  const Network with_j = network.with_edge(i, j);
  const Network with_k = network.with_edge(i, k);
  const Instance& inst = game.instance();

  Lemma2Report r;
  const auto yj = equilibrium_efforts(inst, with_j);
  const auto yk = equilibrium_efforts(inst, with_k);
  r.effort_with_j = yj[i];
  r.effort_with_k = yk[i];
  r.utility_with_j = utility(inst, with_j, yj, i);
  r.utility_with_k = utility(inst, with_k, yk, i);

  const double du = r.utility_with_k - r.utility_with_j;
  const double dy = r.effort_with_k - r.effort_with_j;
  if (options.force_exact || std::abs(du) < options.eps || std::abs(dy) < options.eps) {
    const auto xj = exact::equilibrium_efforts(game, with_j);
    const auto xk = exact::equilibrium_efforts(game, with_k);
    Lemma2Report::Exact e{exact::utility(game, with_j, xj, i),
                          exact::utility(game, with_k, xk, i), xj[i], xk[i]};
    r.utility_order_violated = !(e.utility_with_k > e.utility_with_j);
    r.effort_order_violated = !(e.effort_with_k > e.effort_with_j);
    r.exact = std::move(e);
    return r;
  }
  r.utility_order_violated = !(du > 0.0);
  r.effort_order_violated = !(dy > 0.0);
  return r;
}

namespace {

template <typename T, typename Fn>
T myopic_utility(std::vector<T> frozen, const Network& linked, Agent i,
                 const T& theta_i, const T& alpha, Fn&& evaluate) {
  T sum = 0;
  std::size_t d = 0;
  for (Agent m : linked.neighbors(i)) {
    sum += frozen[m];
    ++d;
  }
  frozen[i] = (1 - alpha) * theta_i + alpha * sum / static_cast<T>(static_cast<double>(d));
  return evaluate(frozen);
}

}  // namespace

MyopicPreference myopic_link_preference(const Game& game, const Network& network,
                                        Agent i, Agent j, Agent k,
                                        const CheckOptions& options) {
  check_triple(game, network, i, j, k);
  const Instance& inst = game.instance();
  const Network with_j = network.with_edge(i, j);
  const Network with_k = network.with_edge(i, k);
  const auto frozen = equilibrium_efforts(inst, network);

  auto float_eval = [&](const Network& g) {
    return [&inst, &g, i](const std::vector<double>& y) { return utility(inst, g, y, i); };
  };
  MyopicPreference p;
  p.frozen_effort_j = frozen[j];
  p.frozen_effort_k = frozen[k];
  p.utility_with_j = myopic_utility<double>(frozen, with_j, i, inst.theta(i),
                                            inst.alpha(), float_eval(with_j));
  p.utility_with_k = myopic_utility<double>(frozen, with_k, i, inst.theta(i),
                                            inst.alpha(), float_eval(with_k));

  double diff = p.utility_with_j - p.utility_with_k;
  int s = sign_of(diff);
  if (options.force_exact || std::abs(diff) < options.eps) {
    const auto xfrozen = exact::equilibrium_efforts(game, network);
    auto exact_eval = [&](const Network& g) {
      return [&game, &g, i](const std::vector<Rational>& y) {
        return exact::utility(game, g, y, i);
      };
    };
    const Rational uj = myopic_utility<Rational>(xfrozen, with_j, i, game.theta()[i],
                                                 game.alpha(), exact_eval(with_j));
    const Rational uk = myopic_utility<Rational>(xfrozen, with_k, i, game.theta()[i],
                                                 game.alpha(), exact_eval(with_k));
    s = sign_of(Rational(uj - uk));
  }
  if (s > 0) {
    p.preferred = j;
  } else if (s < 0) {
    p.preferred = k;
  } else {
    p.preferred = std::min(j, k);
  }
  return p;
}

}  // namespace netform
