#include "strat/kernel.hpp"

#include <stdexcept>

namespace strat {

WeightPoly::WeightPoly(Eigen::VectorXd coeffs) {
  Eigen::Index n = coeffs.size();
  while (n > 0 && coeffs[n - 1] == 0.0) --n;
  if (n == 0) throw std::invalid_argument("weight polynomial must be nonzero");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(coeffs[i])) throw std::invalid_argument("weight coefficients must be finite");
  }
  coeffs_ = coeffs.head(n);
}

WeightPoly::WeightPoly(std::initializer_list<double> coeffs)
    : WeightPoly(Eigen::Map<const Eigen::VectorXd>(coeffs.begin(), static_cast<Eigen::Index>(coeffs.size()))) {}

double WeightPoly::at_offset(double u) const {
  double acc = 0.0;
  for (Eigen::Index d = coeffs_.size() - 1; d >= 0; --d) acc = acc * u + coeffs_[d];
  return acc;
}

WeightPoly operator*(const WeightPoly& a, const WeightPoly& b) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (Eigen::Index i = 0; i < a.coeffs_.size(); ++i) {
    for (Eigen::Index j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return WeightPoly(std::move(out));
}

bool operator==(const WeightPoly& a, const WeightPoly& b) {
  return a.coeffs_.size() == b.coeffs_.size() && a.coeffs_ == b.coeffs_;
}

WeightPoly monomial_weight(int l) {
  if (l < 0) throw std::invalid_argument("weight exponent must be non-negative");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(l + 1);
  c[l] = l % 2 == 0 ? 1.0 : -1.0;
  return WeightPoly(std::move(c));
}

WeightSpec::WeightSpec(std::vector<WeightPoly> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw std::invalid_argument("weight spec needs at least one weight");
}

int WeightSpec::total_degree() const {
  int total = 0;
  for (const auto& w : weights_) total += w.degree();
  return total;
}

WeightSpec monomial_spec(std::span<const int> exponents) {
  std::vector<WeightPoly> weights;
  weights.reserve(exponents.size());
  for (int l : exponents) weights.push_back(monomial_weight(l));
  return WeightSpec(std::move(weights));
}

namespace {

double weight_product(const WeightSpec& spec, std::span<const double> pts, const Interval& iv) {
  if (static_cast<int>(pts.size()) != spec.multiplicity()) {
    throw std::invalid_argument("kernel point count differs from multiplicity");
  }
  double prod = 1.0;
  for (int l = 0; l < spec.multiplicity(); ++l) {
    if (!iv.contains(pts[l])) throw std::domain_error("kernel point outside the interval");
    prod *= spec[l](pts[l], iv);
  }
  return prod;
}

}  // namespace

double eval_K(const WeightSpec& spec, std::span<const double> pts, const Interval& iv) {
  const double prod = weight_product(spec, pts, iv);
  for (std::size_t l = 0; l + 1 < pts.size(); ++l) {
    if (!(pts[l] < pts[l + 1])) return 0.0;
  }
  return prod;
}

double eval_K_star(const WeightSpec& spec, std::span<const double> pts, const Interval& iv) {
  double value = weight_product(spec, pts, iv);
  for (std::size_t l = 0; l + 1 < pts.size(); ++l) {
    if (pts[l] == pts[l + 1]) {
      value *= 0.5;
    } else if (!(pts[l] < pts[l + 1])) {
      return 0.0;
    }
  }
  return value;
}

}  // namespace strat
