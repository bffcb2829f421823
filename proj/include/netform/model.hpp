#pragma once

#include <span>
#include <vector>

#include "netform/network.hpp"

namespace netform {

/// Parameters of the effort game: types, conformity weight and per-link
/// benefit. Construction validates every invariant.
class Instance {
 public:
  /// Throws std::invalid_argument unless every type is positive and finite,
  /// 0 <= alpha < 1, delta >= 0, and 1 <= n <= kMaxAgents.
  Instance(std::vector<double> theta, double alpha, double delta);

  std::size_t size() const { return theta_.size(); }
  std::span<const double> theta() const { return theta_; }
  double theta(Agent i) const { return theta_.at(i); }
  double alpha() const { return alpha_; }
  double delta() const { return delta_; }

  Instance with_delta(double delta) const { return {theta_, alpha_, delta}; }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::vector<double> theta_;
  double alpha_;
  double delta_;
};

using EffortProfile = std::vector<double>;

/// Conditioning report from the direct solver.
struct SolveDiagnostics {
  double max_residual = 0.0;
  bool well_conditioned = true;
};

/// Residual above which a solve is flagged as poorly conditioned.
inline constexpr double kResidualTolerance = 1e-10;

/// Agent i's optimal effort against the given profile:
/// (1-alpha) theta_i + alpha * mean neighbor effort, or theta_i if isolated.
double best_response(const Instance& instance, const Network& network,
                     Agent i, std::span<const double> efforts);

/// Unique Nash effort profile on a fixed network. Solves
/// (I - alpha P) y = (1 - alpha) theta over non-isolated rows, with identity
/// rows y_i = theta_i for isolated agents, by Gaussian elimination with
/// partial pivoting.
EffortProfile equilibrium_efforts(const Instance& instance,
                                  const Network& network,
                                  SolveDiagnostics* diagnostics = nullptr);

/// Payoff of agent i at an arbitrary effort profile.
double utility(const Instance& instance, const Network& network,
               std::span<const double> efforts, Agent i);

/// Equilibrium payoffs U_i(g) for every agent.
std::vector<double> payoffs(const Instance& instance, const Network& network);

/// max_i |y_i - best_response(i, y)|.
double fixed_point_residual(const Instance& instance, const Network& network,
                            std::span<const double> efforts);

struct IterationResult {
  EffortProfile efforts;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Synchronous (Jacobi) best-response iteration from `start` until the
/// sup-norm step falls below `tolerance` times max(1, sup-norm of the
/// iterate) or `max_iterations` is hit. The relative test matters for alpha
/// near one, where rounding noise settles into a tiny two-cycle.
IterationResult iterate_best_responses(const Instance& instance,
                                       const Network& network,
                                       EffortProfile start,
                                       double tolerance = 1e-13,
                                       std::size_t max_iterations = 200000);

}  // namespace netform
