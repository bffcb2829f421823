#include "netform/compare.hpp"

#include <cmath>

#include "netform/model.hpp"
#include "netform/stability.hpp"

namespace netform {

UtilityComparer::UtilityComparer(const Game& game, const Network& base,
                                 const CheckOptions& options)
    : game_(game),
      network_(base),
      eps_(options.eps),
      force_exact_(options.force_exact),
      base_(payoffs(game.instance(), base)) {}

const std::vector<Rational>& UtilityComparer::exact_base() {
  if (!exact_base_) exact_base_ = exact::payoffs(game_, network_);
  return *exact_base_;
}

std::vector<UtilityDelta> UtilityComparer::deltas(const Network& next,
                                                  const std::vector<Agent>& agents) {
  const auto after = payoffs(game_.instance(), next);
  std::vector<UtilityDelta> out(agents.size());
  bool escalate = force_exact_;
  for (std::size_t k = 0; k < agents.size(); ++k) {
    out[k].value = after[agents[k]] - base_[agents[k]];
    out[k].sign = sign_of(out[k].value);
    if (std::abs(out[k].value) < eps_) escalate = true;
  }
  if (!escalate) return out;

  ++escalations_;
  const auto& before = exact_base();
  const auto exact_after = exact::payoffs(game_, next);
  for (std::size_t k = 0; k < agents.size(); ++k) {
    Rational d = exact_after[agents[k]] - before[agents[k]];
    const int s = sign_of(d);
    out[k].escalated = true;
    out[k].disagreed = s != out[k].sign;
    out[k].sign = s;
    out[k].exact = std::move(d);
  }
  return out;
}

}  // namespace netform
