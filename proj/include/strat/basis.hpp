#pragma once

#include <cmath>
#include <optional>
#include <string_view>

#include <Eigen/Core>

namespace strat {

/// Closed integration interval [t, T] with T > t.
class Interval {
 public:
  Interval(double start, double end);

  double start() const { return start_; }
  double end() const { return end_; }
  double length() const { return end_ - start_; }
  double midpoint() const { return 0.5 * (start_ + end_); }
  bool contains(double x) const { return x >= start_ && x <= end_; }

  /// Affine map of x in [t, T] onto [-1, 1].
  double to_reference(double x) const { return (x - midpoint()) * 2.0 / length(); }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double start_;
  double end_;
};

enum class BasisKind { legendre, trigonometric };

std::string_view to_string(BasisKind kind);
std::optional<BasisKind> parse_basis(std::string_view name);

/// Legendre polynomial P_n(x) by the upward three-term recurrence.
template <typename Scalar>
Scalar legendre_p(int n, Scalar x) {
  if (n == 0) return Scalar(1);
  Scalar prev(1);
  Scalar cur = x;
  for (int k = 1; k < n; ++k) {
    Scalar next = (Scalar(2 * k + 1) * x * cur - Scalar(k) * prev) / Scalar(k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Value of the j-th orthonormal basis function on [t, T] at x.
///
/// Legendre: sqrt((2j+1)/(T-t)) P_j(to_reference(x)).
/// Trigonometric: phi_0 = 1/sqrt(T-t), phi_{2r-1} = sqrt(2/(T-t)) sin(2 pi r (x-t)/(T-t)),
/// phi_{2r} = sqrt(2/(T-t)) cos(2 pi r (x-t)/(T-t)).
///
/// Throws std::invalid_argument for j < 0 and std::domain_error for x outside [t, T].
double eval_phi(BasisKind kind, int j, double x, const Interval& iv);

/// phi_0(x), ..., phi_max_j(x) in one pass.
Eigen::VectorXd eval_phi_all(BasisKind kind, int max_j, double x, const Interval& iv);

}  // namespace strat
