#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "strat/basis.hpp"

namespace strat {

/// Polynomial weight psi(s) = sum_d coeffs[d] (s - t)^d.
class WeightPoly {
 public:
  /// Trailing zero coefficients are dropped; the zero polynomial is rejected.
  explicit WeightPoly(Eigen::VectorXd coeffs);
  WeightPoly(std::initializer_list<double> coeffs);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }

  /// Value at u = s - t.
  double at_offset(double u) const;
  double operator()(double s, const Interval& iv) const { return at_offset(s - iv.start()); }

  friend WeightPoly operator*(const WeightPoly& a, const WeightPoly& b);
  friend bool operator==(const WeightPoly& a, const WeightPoly& b);

 private:
  Eigen::VectorXd coeffs_;
};

/// (t - s)^l written in u = s - t, i.e. (-1)^l u^l.
WeightPoly monomial_weight(int l);

/// Weight vector (psi_1, ..., psi_k); psi_1 belongs to the innermost integral.
class WeightSpec {
 public:
  WeightSpec() = default;
  explicit WeightSpec(std::vector<WeightPoly> weights);

  int multiplicity() const { return static_cast<int>(weights_.size()); }
  const WeightPoly& operator[](int l) const { return weights_[static_cast<std::size_t>(l)]; }
  const std::vector<WeightPoly>& weights() const { return weights_; }
  int total_degree() const;

  friend bool operator==(const WeightSpec&, const WeightSpec&) = default;

 private:
  std::vector<WeightPoly> weights_;
};

/// Weights (t - s)^{l_1}, ..., (t - s)^{l_k}.
WeightSpec monomial_spec(std::span<const int> exponents);

/// K(t_1..t_k) = prod psi_l(t_l) on t_1 < ... < t_k, zero elsewhere; K(t_1) = psi_1(t_1).
double eval_K(const WeightSpec& spec, std::span<const double> pts, const Interval& iv);

/// K with each diagonal t_l == t_{l+1} weighted by 1/2 (exact floating-point equality).
double eval_K_star(const WeightSpec& spec, std::span<const double> pts, const Interval& iv);

}  // namespace strat
