#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netform/model.hpp"
#include "netform/network.hpp"

namespace netform {

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
using Rational = mpq_class;

/// Parses "p/q", a signed integer, or a plain decimal such as "0.99" into
/// an exact rational. Throws std::invalid_argument on malformed text or a
/// zero denominator.
Rational parse_rational(std::string_view text);

/// Exact value of a finite double (its binary expansion, not its shortest
/// decimal).
Rational rational_from_double(double value);

/// Nearest double to q, ties to even.
double to_double(const Rational& q);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& q);

/// Game parameters held exactly, with a correctly rounded double mirror
/// used by the fast path.
class Game {
 public:
  /// Throws std::invalid_argument on the same conditions as Instance.
  Game(std::vector<Rational> theta, Rational alpha, Rational delta);
  /// Lifts a double instance through the exact binary value of each field.
  explicit Game(const Instance& instance);

  std::size_t size() const { return theta_.size(); }
  const Instance& instance() const { return approx_; }
  const std::vector<Rational>& theta() const { return theta_; }
  const Rational& alpha() const { return alpha_; }
  const Rational& delta() const { return delta_; }

  Game with_delta(const Rational& delta) const { return {theta_, alpha_, delta}; }

  friend bool operator==(const Game& a, const Game& b) {
    return a.theta_ == b.theta_ && a.alpha_ == b.alpha_ && a.delta_ == b.delta_;
  }

 private:
  std::vector<Rational> theta_;
  Rational alpha_;
  Rational delta_;
  Instance approx_;
};

namespace exact {

/// Exact solution of the equilibrium system, by fraction-exact Gaussian
/// elimination.
std::vector<Rational> equilibrium_efforts(const Game& game, const Network& network);

Rational utility(const Game& game, const Network& network,
                 std::span<const Rational> efforts, Agent i);

std::vector<Rational> payoffs(const Game& game, const Network& network);

/// max_i |float y*_i - exact y*_i rounded to double|.
double compare_exact_float(const Game& game, const Network& network);

}  // namespace exact
}  // namespace netform
