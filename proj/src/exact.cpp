#include "netform/exact.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>

namespace netform {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw std::invalid_argument("malformed rational \"" + std::string(whole) + "\"");
  }
  mpz_class z(std::string(s), 10);
  return negative ? mpz_class(-z) : z;
}

std::vector<double> approx_theta(const std::vector<Rational>& theta) {
  std::vector<double> out;
  out.reserve(theta.size());
  for (const auto& t : theta) out.push_back(to_double(t));
  return out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash), text);
    std::string_view den_text = text.substr(slash + 1);
    if (!den_text.empty() && den_text.front() == '+') den_text.remove_prefix(1);
    if (!all_digits(den_text)) {
      throw std::invalid_argument("malformed rational \"" + std::string(text) + "\"");
    }
    mpz_class den(std::string(den_text), 10);
    if (den == 0) {
      throw std::invalid_argument("zero denominator in \"" + std::string(text) + "\"");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+'))
      int_part.remove_prefix(1);
    if ((int_part.empty() && frac_part.empty()) ||
        (!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part))) {
      throw std::invalid_argument("malformed rational \"" + std::string(text) + "\"");
    }
    std::string digits = std::string(int_part) + std::string(frac_part);
    mpz_class num(digits.empty() ? std::string("0") : digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_part.size());
    Rational q(negative ? mpz_class(-num) : num, den);
    q.canonicalize();
    return q;
  }

  return Rational(parse_integer(text, text));
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value");
  return Rational(value);
}

double to_double(const Rational& q) {
  // mpq_get_d truncates toward zero; step to the neighbor if it is closer.
  const double t = q.get_d();
  const double away = std::nextafter(t, q >= 0 ? INFINITY : -INFINITY);
  if (!std::isfinite(away)) return t;
  const Rational err_t = abs(q - Rational(t));
  const Rational err_away = abs(q - Rational(away));
  if (err_away < err_t) return away;
  if (err_away == err_t) {
    // Tie: pick the even significand.
    std::int64_t bits_t;
    static_assert(sizeof(bits_t) == sizeof(t));
    std::memcpy(&bits_t, &t, sizeof t);
    return (bits_t & 1) ? away : t;
  }
  return t;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_str();
}

Game::Game(std::vector<Rational> theta, Rational alpha, Rational delta)
    : theta_(std::move(theta)),
      alpha_(std::move(alpha)),
      delta_(std::move(delta)),
      approx_(approx_theta(theta_), to_double(alpha_), to_double(delta_)) {
  // Rounding in the mirror can hide a boundary violation.
  for (std::size_t i = 0; i < theta_.size(); ++i) {
    if (theta_[i] <= 0) {
      throw std::invalid_argument("theta[" + std::to_string(i + 1) +
                                  "] must be a positive real");
    }
  }
  if (alpha_ < 0 || alpha_ >= 1) throw std::invalid_argument("alpha must lie in [0, 1)");
  if (delta_ < 0) throw std::invalid_argument("delta must be nonnegative");
}

Game::Game(const Instance& instance)
    : alpha_(rational_from_double(instance.alpha())),
      delta_(rational_from_double(instance.delta())),
      approx_(instance) {
  theta_.reserve(instance.size());
  for (double t : instance.theta()) theta_.push_back(rational_from_double(t));
}

namespace exact {

std::vector<Rational> equilibrium_efforts(const Game& game, const Network& network) {
  const std::size_t n = game.size();
  if (network.size() != n) throw std::invalid_argument("network size mismatch");
  const Rational& a = game.alpha();
  const Rational one_minus_a = 1 - a;

  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1, 0));
  for (Agent i = 0; i < n; ++i) {
    m[i][i] = 1;
    const auto nbrs = network.neighbors(i);
    if (nbrs.empty()) {
      m[i][n] = game.theta()[i];
      continue;
    }
    const Rational weight = a / Rational(static_cast<unsigned long>(nbrs.size()));
    for (Agent j : nbrs) m[i][j] -= weight;
    m[i][n] = one_minus_a * game.theta()[i];
  }

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) throw std::logic_error("singular equilibrium system");
    std::swap(m[col], m[pivot]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      const Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c <= n; ++c) m[r][c] -= f * m[col][c];
    }
  }

  std::vector<Rational> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = m[i][n] / m[i][i];
  return y;
}

Rational utility(const Game& game, const Network& network,
                 std::span<const Rational> efforts, Agent i) {
  if (efforts.size() != game.size()) {
    throw std::invalid_argument("effort profile length mismatch");
  }
  const Rational& yi = efforts[i];
  const Rational& th = game.theta()[i];
  const auto nbrs = network.neighbors(i);
  if (nbrs.empty()) return th * yi - yi * yi / 2;

  const Rational& a = game.alpha();
  const Rational d(static_cast<unsigned long>(nbrs.size()));
  Rational u = (1 - a) * th * yi - yi * yi / 2;
  for (Agent j : nbrs) u += game.delta() + a * yi * efforts[j] / d;
  return u;
}

std::vector<Rational> payoffs(const Game& game, const Network& network) {
  const auto y = equilibrium_efforts(game, network);
  std::vector<Rational> u(game.size());
  for (Agent i = 0; i < game.size(); ++i) u[i] = utility(game, network, y, i);
  return u;
}

double compare_exact_float(const Game& game, const Network& network) {
  const auto approx = netform::equilibrium_efforts(game.instance(), network);
  const auto exact_y = equilibrium_efforts(game, network);
  double worst = 0.0;
  for (std::size_t i = 0; i < approx.size(); ++i)
    worst = std::max(worst, std::abs(approx[i] - to_double(exact_y[i])));
  return worst;
}

}  // namespace exact
}  // namespace netform
