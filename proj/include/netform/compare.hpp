#pragma once

#include <optional>
#include <vector>

#include "netform/exact.hpp"
#include "netform/network.hpp"

namespace netform {

struct CheckOptions;

/// Sign of a utility change, decided in floats unless the margin is too
/// small or exact mode is on.
struct UtilityDelta {
  double value = 0.0;
  int sign = 0;
  bool escalated = false;
  /// Float sign disagreed with the exact sign.
  bool disagreed = false;
  std::optional<Rational> exact;
};

/// Compares re-equilibrated payoffs of a fixed base network against
/// candidate networks. Base payoffs are computed once; the exact base is
/// computed on first escalation.
class UtilityComparer {
 public:
  UtilityComparer(const Game& game, const Network& base, const CheckOptions& options);

  /// U_a(next) - U_a(base) for each listed agent. If any |float change| is
  /// below the threshold, all listed changes are re-decided exactly.
  std::vector<UtilityDelta> deltas(const Network& next, const std::vector<Agent>& agents);

  const std::vector<double>& base_payoffs() const { return base_; }
  std::size_t escalations() const { return escalations_; }

 private:
  const std::vector<Rational>& exact_base();

  const Game& game_;
  const Network& network_;
  double eps_;
  bool force_exact_;
  std::vector<double> base_;
  std::optional<std::vector<Rational>> exact_base_;
  std::size_t escalations_ = 0;
};

inline int sign_of(double x) { return (x > 0.0) - (x < 0.0); }
inline int sign_of(const Rational& q) { return sgn(q); }

}  // namespace netform
