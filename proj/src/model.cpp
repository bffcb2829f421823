#include "netform/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace netform {

Instance::Instance(std::vector<double> theta, double alpha, double delta)
    : theta_(std::move(theta)), alpha_(alpha), delta_(delta) {
  if (theta_.empty() || theta_.size() > kMaxAgents) {
    throw std::invalid_argument("agent count must be in [1, " +
                                std::to_string(kMaxAgents) + "]");
  }
  for (std::size_t i = 0; i < theta_.size(); ++i) {
    if (!std::isfinite(theta_[i]) || theta_[i] <= 0.0) {
      throw std::invalid_argument("theta[" + std::to_string(i + 1) +
                                  "] must be a positive real");
    }
  }
  if (!std::isfinite(alpha_) || alpha_ < 0.0 || alpha_ >= 1.0) {
    throw std::invalid_argument("alpha must lie in [0, 1)");
  }
  if (!std::isfinite(delta_) || delta_ < 0.0) {
    throw std::invalid_argument("delta must be nonnegative");
  }
}

namespace {

void check_lengths(const Instance& instance, const Network& network) {
  if (instance.size() != network.size()) {
    throw std::invalid_argument("instance has " +
                                std::to_string(instance.size()) +
                                " agents but network has " +
                                std::to_string(network.size()));
  }
}

void check_profile(const Instance& instance, std::span<const double> efforts) {
  if (efforts.size() != instance.size()) {
    throw std::invalid_argument("effort profile length mismatch");
  }
}

double neighbor_mean(const Network& network, Agent i,
                     std::span<const double> efforts) {
  double sum = 0.0;
  std::size_t d = 0;
  for (Agent j : network.neighbors(i)) {
    sum += efforts[j];
    ++d;
  }
  return sum / static_cast<double>(d);
}

}  // namespace

double best_response(const Instance& instance, const Network& network,
                     Agent i, std::span<const double> efforts) {
  check_lengths(instance, network);
  check_profile(instance, efforts);
  if (network.degree(i) == 0) return instance.theta(i);
  const double a = instance.alpha();
  return (1.0 - a) * instance.theta(i) + a * neighbor_mean(network, i, efforts);
}

EffortProfile equilibrium_efforts(const Instance& instance,
                                  const Network& network,
                                  SolveDiagnostics* diagnostics) {
  check_lengths(instance, network);
  const std::size_t n = instance.size();
  const double a = instance.alpha();

  // Row-major augmented matrix [A | b].
  const std::size_t w = n + 1;
  std::vector<double> m(n * w, 0.0);
  for (Agent i = 0; i < n; ++i) {
    double* row = &m[i * w];
    row[i] = 1.0;
    const auto nbrs = network.neighbors(i);
    if (nbrs.empty()) {
      row[n] = instance.theta(i);
      continue;
    }
    const double weight = a / static_cast<double>(nbrs.size());
    for (Agent j : nbrs) row[j] -= weight;
    row[n] = (1.0 - a) * instance.theta(i);
  }

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r * w + col]) > std::abs(m[pivot * w + col])) pivot = r;
    }
    if (pivot != col) {
      for (std::size_t c = col; c < w; ++c) std::swap(m[col * w + c], m[pivot * w + c]);
    }
    const double p = m[col * w + col];
    // I - alpha P is strictly row diagonally dominant for alpha < 1, so the
    // pivot is nonzero.
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m[r * w + col] / p;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < w; ++c) m[r * w + c] -= f * m[col * w + c];
    }
  }

  EffortProfile y(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double s = m[k * w + n];
    for (std::size_t c = k + 1; c < n; ++c) s -= m[k * w + c] * y[c];
    y[k] = s / m[k * w + k];
  }

  if (diagnostics != nullptr) {
    diagnostics->max_residual = fixed_point_residual(instance, network, y);
    diagnostics->well_conditioned =
        diagnostics->max_residual < kResidualTolerance;
  }
  return y;
}

double utility(const Instance& instance, const Network& network,
               std::span<const double> efforts, Agent i) {
  check_lengths(instance, network);
  check_profile(instance, efforts);
  const double yi = efforts[i];
  const double th = instance.theta(i);
  const auto nbrs = network.neighbors(i);
  if (nbrs.empty()) return th * yi - yi * yi / 2.0;

  const double a = instance.alpha();
  const double d = static_cast<double>(nbrs.size());
  double u = (1.0 - a) * th * yi - yi * yi / 2.0;
  for (Agent j : nbrs) u += instance.delta() + a * yi * efforts[j] / d;
  return u;
}

std::vector<double> payoffs(const Instance& instance, const Network& network) {
  const EffortProfile y = equilibrium_efforts(instance, network);
  std::vector<double> u(instance.size());
  for (Agent i = 0; i < instance.size(); ++i) u[i] = utility(instance, network, y, i);
  return u;
}

double fixed_point_residual(const Instance& instance, const Network& network,
                            std::span<const double> efforts) {
  double worst = 0.0;
  for (Agent i = 0; i < instance.size(); ++i) {
    worst = std::max(worst, std::abs(efforts[i] -
                                     best_response(instance, network, i, efforts)));
  }
  return worst;
}

IterationResult iterate_best_responses(const Instance& instance,
                                       const Network& network,
                                       EffortProfile start, double tolerance,
                                       std::size_t max_iterations) {
  check_lengths(instance, network);
  check_profile(instance, start);
  IterationResult out{std::move(start), 0, false};
  EffortProfile next(instance.size());
  while (out.iterations < max_iterations) {
    double step = 0.0;
    double scale = 1.0;
    for (Agent i = 0; i < instance.size(); ++i) {
      next[i] = best_response(instance, network, i, out.efforts);
      step = std::max(step, std::abs(next[i] - out.efforts[i]));
      scale = std::max(scale, std::abs(next[i]));
    }
    out.efforts.swap(next);
    ++out.iterations;
    if (step < tolerance * scale) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace netform
