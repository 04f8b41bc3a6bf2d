#include "strat/basis.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace strat {

Interval::Interval(double start, double end) : start_(start), end_(end) {
  if (!std::isfinite(start) || !std::isfinite(end) || !(end > start)) {
    throw std::invalid_argument("interval needs finite endpoints with T > t");
  }
}

std::string_view to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::legendre:
      return "legendre";
    case BasisKind::trigonometric:
      return "trigonometric";
  }
  return "unknown";
}

std::optional<BasisKind> parse_basis(std::string_view name) {
  if (name == "legendre") return BasisKind::legendre;
  if (name == "trigonometric" || name == "trig") return BasisKind::trigonometric;
  return std::nullopt;
}

namespace {

void check_point(double x, const Interval& iv) {
  if (!iv.contains(x)) {
    throw std::domain_error("basis evaluation point " + std::to_string(x) + " outside the interval");
  }
}

}  // namespace

double eval_phi(BasisKind kind, int j, double x, const Interval& iv) {
  if (j < 0) throw std::invalid_argument("basis index must be non-negative");
  check_point(x, iv);
  const double len = iv.length();
  if (kind == BasisKind::legendre) {
    return std::sqrt((2.0 * j + 1.0) / len) * legendre_p(j, iv.to_reference(x));
  }
  if (j == 0) return 1.0 / std::sqrt(len);
  const int r = (j + 1) / 2;
  const double arg = 2.0 * std::numbers::pi * r * ((x - iv.start()) / len);
  const double scale = std::sqrt(2.0 / len);
  return j % 2 == 1 ? scale * std::sin(arg) : scale * std::cos(arg);
}

Eigen::VectorXd eval_phi_all(BasisKind kind, int max_j, double x, const Interval& iv) {
  if (max_j < 0) throw std::invalid_argument("basis index must be non-negative");
  check_point(x, iv);
  const double len = iv.length();
  Eigen::VectorXd out(max_j + 1);
  if (kind == BasisKind::legendre) {
    const double y = iv.to_reference(x);
    double prev = 1.0;
    double cur = y;
    out[0] = prev;
    if (max_j >= 1) out[1] = cur;
    for (int k = 1; k < max_j; ++k) {
      const double next = ((2.0 * k + 1.0) * y * cur - k * prev) / (k + 1.0);
      prev = cur;
      cur = next;
      out[k + 1] = cur;
    }
    for (int j = 0; j <= max_j; ++j) out[j] *= std::sqrt((2.0 * j + 1.0) / len);
    return out;
  }
  const double scale = std::sqrt(2.0 / len);
  const double u = (x - iv.start()) / len;
  out[0] = 1.0 / std::sqrt(len);
  for (int j = 1; j <= max_j; ++j) {
    const int r = (j + 1) / 2;
    const double arg = 2.0 * std::numbers::pi * r * u;
    out[j] = j % 2 == 1 ? scale * std::sin(arg) : scale * std::cos(arg);
  }
  return out;
}

}  // namespace strat
