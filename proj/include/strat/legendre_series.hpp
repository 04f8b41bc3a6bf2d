#pragma once

#include <algorithm>
#include <utility>

#include <Eigen/Core>

namespace strat {

/// Polynomial on [-1, 1] held by its Legendre coefficients, f(x) = sum_n c_n P_n(x).
///
/// Every operation here is a banded linear map on the coefficient vector
/// (multiplication by x, antiderivative), so high-degree work never passes
/// through the ill-conditioned monomial basis.
template <typename Scalar>
class LegendreSeries {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  LegendreSeries() : coeffs_(Vector::Zero(1)) {}
  explicit LegendreSeries(Vector coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() == 0) coeffs_ = Vector::Zero(1);
  }

  static LegendreSeries constant(Scalar value) {
    Vector c(1);
    c[0] = value;
    return LegendreSeries(std::move(c));
  }

  static LegendreSeries basis(int n) {
    Vector c = Vector::Zero(n + 1);
    c[n] = Scalar(1);
    return LegendreSeries(std::move(c));
  }

  /// Storage degree; the leading coefficient may be zero.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Vector& coeffs() const { return coeffs_; }
  Scalar coeff(int n) const { return n >= 0 && n <= degree() ? coeffs_[n] : Scalar(0); }

  /// x f(x), using x P_n = ((n+1) P_{n+1} + n P_{n-1}) / (2n+1).
  LegendreSeries times_x() const {
    const int d = degree();
    Vector out = Vector::Zero(d + 2);
    for (int n = 0; n <= d; ++n) {
      const Scalar c = coeffs_[n] / Scalar(2 * n + 1);
      out[n + 1] += c * Scalar(n + 1);
      if (n > 0) out[n - 1] += c * Scalar(n);
    }
    return LegendreSeries(std::move(out));
  }

  /// F(x) = int_{-1}^{x} f, using int_{-1}^{x} P_n = (P_{n+1} - P_{n-1}) / (2n+1) for n >= 1
  /// and int_{-1}^{x} P_0 = P_1 + P_0.
  LegendreSeries antiderivative() const {
    const int d = degree();
    Vector out = Vector::Zero(d + 2);
    out[0] += coeffs_[0];
    out[1] += coeffs_[0];
    for (int n = 1; n <= d; ++n) {
      const Scalar c = coeffs_[n] / Scalar(2 * n + 1);
      out[n + 1] += c;
      out[n - 1] -= c;
    }
    return LegendreSeries(std::move(out));
  }

  /// int_{-1}^{1} f.
  Scalar integral() const { return Scalar(2) * coeffs_[0]; }

  /// Clenshaw evaluation.
  Scalar operator()(Scalar x) const {
    Scalar b1(0);
    Scalar b2(0);
    for (int k = degree(); k >= 0; --k) {
      const Scalar alpha = Scalar(2 * k + 1) * x / Scalar(k + 1);
      const Scalar beta = -Scalar(k + 1) / Scalar(k + 2);
      const Scalar b0 = coeffs_[k] + alpha * b1 + beta * b2;
      b2 = b1;
      b1 = b0;
    }
    return b1;
  }

  LegendreSeries& operator*=(Scalar s) {
    coeffs_ *= s;
    return *this;
  }

  friend LegendreSeries operator*(Scalar s, LegendreSeries f) { return f *= s; }

  friend LegendreSeries operator+(const LegendreSeries& a, const LegendreSeries& b) {
    const int d = std::max(a.degree(), b.degree());
    Vector out = Vector::Zero(d + 1);
    out.head(a.coeffs_.size()) += a.coeffs_;
    out.head(b.coeffs_.size()) += b.coeffs_;
    return LegendreSeries(std::move(out));
  }

 private:
  Vector coeffs_;
};

/// Calls visit(n, f * P_n) for n = 0..max_n, building the products by the
/// three-term recurrence Q_n = ((2n-1) x Q_{n-1} - (n-1) Q_{n-2}) / n.
template <typename Scalar, typename Visitor>
void for_each_times_legendre(const LegendreSeries<Scalar>& f, int max_n, Visitor&& visit) {
  LegendreSeries<Scalar> prev = f;
  visit(0, static_cast<const LegendreSeries<Scalar>&>(prev));
  if (max_n < 1) return;
  LegendreSeries<Scalar> cur = f.times_x();
  visit(1, static_cast<const LegendreSeries<Scalar>&>(cur));
  for (int n = 2; n <= max_n; ++n) {
    LegendreSeries<Scalar> next = (Scalar(2 * n - 1) / Scalar(n)) * cur.times_x() + (-Scalar(n - 1) / Scalar(n)) * prev;
    prev = std::move(cur);
    cur = std::move(next);
    visit(n, static_cast<const LegendreSeries<Scalar>&>(cur));
  }
}

}  // namespace strat
