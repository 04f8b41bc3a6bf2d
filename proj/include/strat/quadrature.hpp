#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include <Eigen/Core>

#include "strat/basis.hpp"

namespace strat {

template <typename Scalar>
struct QuadratureRule {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector nodes;
  Vector weights;

  Eigen::Index size() const { return nodes.size(); }

  template <typename F>
  Scalar integrate(F&& f) const {
    Scalar sum(0);
    for (Eigen::Index i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

namespace detail {

// P_n(x) and P_n'(x); the derivative formula is singular at x = +-1, which
// Newton iterates starting from interior guesses never reach.
template <typename Scalar>
std::pair<Scalar, Scalar> legendre_with_derivative(int n, Scalar x) {
  Scalar p0(1);
  Scalar p1 = x;
  for (int k = 1; k < n; ++k) {
    Scalar p2 = (Scalar(2 * k + 1) * x * p1 - Scalar(k) * p0) / Scalar(k + 1);
    p0 = p1;
    p1 = p2;
  }
  const Scalar dp = n == 1 ? Scalar(1) : Scalar(n) * (x * p1 - p0) / (x * x - Scalar(1));
  return {p1, dp};
}

}  // namespace detail

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
/// Roots are polished by Newton iteration until the update drops below 1e-15.
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_legendre_reference(int n) {
  if (n < 1) throw std::invalid_argument("gauss rule needs at least one node");
  QuadratureRule<Scalar> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    Scalar x = std::cos(std::numbers::pi_v<Scalar> * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = detail::legendre_with_derivative(n, x);
      const Scalar dx = p / dp;
      x -= dx;
      if (std::abs(dx) < Scalar(1e-15)) break;
    }
    const Scalar dp = detail::legendre_with_derivative(n, x).second;
    const Scalar w = Scalar(2) / ((Scalar(1) - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
    rule.nodes[i] = -x;
    rule.weights[i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = Scalar(0);
  return rule;
}

/// Gauss-Legendre rule mapped onto [a, b].
template <typename Scalar = double>
QuadratureRule<Scalar> map_rule(const QuadratureRule<Scalar>& reference, Scalar a, Scalar b) {
  const Scalar half = (b - a) / Scalar(2);
  const Scalar mid = (a + b) / Scalar(2);
  QuadratureRule<Scalar> out;
  out.nodes = (reference.nodes.array() * half + mid).matrix();
  out.weights = reference.weights * half;
  return out;
}

/// n-point Gauss-Legendre rule on the interval, exact for degree 2n-1.
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_rule(int n, const Interval& iv) {
  return map_rule(gauss_legendre_reference<Scalar>(n), Scalar(iv.start()), Scalar(iv.end()));
}

/// Composite rule: `panels` equal panels, each carrying the given reference rule.
template <typename Scalar = double>
QuadratureRule<Scalar> composite_rule(const QuadratureRule<Scalar>& reference, int panels, Scalar a, Scalar b) {
  if (panels < 1) throw std::invalid_argument("composite rule needs at least one panel");
  const Eigen::Index per = reference.size();
  QuadratureRule<Scalar> out;
  out.nodes.resize(per * panels);
  out.weights.resize(per * panels);
  const Scalar width = (b - a) / Scalar(panels);
  for (int q = 0; q < panels; ++q) {
    const Scalar lo = a + width * Scalar(q);
    const Scalar hi = q + 1 == panels ? b : a + width * Scalar(q + 1);
    auto mapped = map_rule(reference, lo, hi);
    out.nodes.segment(q * per, per) = mapped.nodes;
    out.weights.segment(q * per, per) = mapped.weights;
  }
  return out;
}

}  // namespace strat
